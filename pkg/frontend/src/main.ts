/** App entry: session setup form, board, submit/clear/resign controls. */

import { Board } from "./board.js";
import { ApiClient, SCHEMA, StrategyInfo } from "./protocol.js";
import { GameSession } from "./session.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  Object.entries(attrs).forEach(([k, v]) => node.setAttribute(k, v));
  if (text) node.textContent = text;
  return node;
}

async function boot(): Promise<void> {
  const app = document.getElementById("app") as HTMLElement;
  const base =
    new URLSearchParams(window.location.search).get("api") ??
    "http://127.0.0.1:8023";
  const client = new ApiClient(base);

  let strategies: StrategyInfo[] = [];
  try {
    strategies = (await client.strategies()).strategies;
  } catch {
    app.appendChild(
      el("div", { class: "error" }, `cannot reach the service at ${base}`),
    );
    return;
  }

  const form = el("form", { class: "setup" });
  const graphInput = el("input", { value: "bipartite:20,20", name: "graph" });
  const mInput = el("input", { value: "2", name: "m", type: "number" });
  const rInput = el("input", { value: "10", name: "r", type: "number" });
  const sInput = el("input", { value: "7", name: "s", type: "number" });
  const seedInput = el("input", { value: "0", name: "seed", type: "number" });
  const sideSelect = el("select", { name: "side" });
  for (const side of ["revolutionaries", "spies"]) {
    sideSelect.appendChild(el("option", { value: side }, side));
  }
  const stratSelect = el("select", { name: "strategy" });
  const fillStrategies = () => {
    const aiSide =
      sideSelect.value === "revolutionaries" ? "spies" : "revolutionaries";
    stratSelect.innerHTML = "";
    strategies
      .filter((s) => s.side === aiSide)
      .forEach((s) =>
        stratSelect.appendChild(el("option", { value: s.id }, s.id)),
      );
  };
  sideSelect.addEventListener("change", fillStrategies);
  fillStrategies();

  const rows: Array<[string, HTMLElement]> = [
    ["graph", graphInput],
    ["meeting size m", mInput],
    ["revolutionaries r", rInput],
    ["spies s", sInput],
    ["seed", seedInput],
    ["you play", sideSelect],
    ["opponent", stratSelect],
  ];
  for (const [label, input] of rows) {
    const row = el("label", { class: "row" }, label + " ");
    row.appendChild(input);
    form.appendChild(row);
  }
  const startBtn = el("button", { type: "submit" }, "start game");
  form.appendChild(startBtn);
  app.appendChild(form);

  const boardRoot = el("div", { id: "board" });
  const controls = el("div", { class: "controls" });
  const status = el("div", { class: "status" }, `schema ${SCHEMA} @ ${base}`);
  app.appendChild(boardRoot);
  app.appendChild(controls);
  app.appendChild(status);

  form.addEventListener("submit", async (ev) => {
    ev.preventDefault();
    boardRoot.innerHTML = "";
    controls.innerHTML = "";
    let session: GameSession;
    try {
      session = await GameSession.create(client, {
        graph: graphInput.value,
        m: Number(mInput.value),
        r: Number(rInput.value),
        s: Number(sInput.value),
        human_side: sideSelect.value as "revolutionaries" | "spies",
        ai_strategy: stratSelect.value,
        seed: Number(seedInput.value),
      });
    } catch (err) {
      status.textContent = String(err);
      return;
    }
    const board = new Board(boardRoot, session);
    const submit = el("button", {}, "submit move");
    submit.addEventListener("click", async () => {
      try {
        const next = await session.submitPending();
        if (next === null) {
          board.render(); // show the mirror hint
        }
      } catch (err) {
        status.textContent = String(err);
      }
    });
    const clear = el("button", {}, "clear");
    clear.addEventListener("click", () => {
      session.composer.apply({ kind: "clear" });
      board.render();
    });
    const resign = el("button", {}, "resign");
    resign.addEventListener("click", () => session.resign());
    controls.append(submit, clear, resign);
    session.onState((state) => {
      status.textContent =
        state.status === "finished" && state.outcome
          ? `game over: ${state.outcome.winner} (round ${state.outcome.round})`
          : `round ${state.round}, ${state.phase}`;
    });
  });
}

boot();
