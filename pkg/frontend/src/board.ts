/** DOM board: positioned vertex discs with revolutionary/spy badges,
 * covered/unguarded highlights, click-to-compose move entry and the win
 * banner. */

import { firstUnguardedMeeting, partCounters, vertexBadges } from "./counters.js";
import { GameSession } from "./session.js";
import { layoutKind, vertexPositions } from "./layout.js";
import { SessionState } from "./protocol.js";

export class Board {
  private root: HTMLElement;
  private selected: number | null = null;

  constructor(root: HTMLElement, private session: GameSession) {
    this.root = root;
    session.onState(() => this.render());
    this.render();
  }

  private phaseLabel(state: SessionState): string {
    const yours =
      (state.human_side === "revolutionaries") ===
      (state.phase === "rev_placement" || state.phase === "rev_to_move");
    const names: Record<string, string> = {
      rev_placement: "revolutionary placement",
      spy_placement: "spy placement",
      rev_to_move: "revolutionaries to move",
      spy_to_move: "spies to move",
    };
    return `${names[state.phase]}${yours ? " (you)" : ""} - round ${state.round}`;
  }

  private onVertexClick(vertex: number): void {
    const state = this.session.state;
    const placing =
      state.phase === "rev_placement" || state.phase === "spy_placement";
    if (placing) {
      this.session.composer.apply({ kind: "place", to: vertex, count: 1 });
    } else if (this.selected === null) {
      if (this.session.composer.remainingAt(vertex) > 0) {
        this.selected = vertex;
      }
    } else {
      this.session.composer.apply({
        kind: "drag",
        from: this.selected,
        to: vertex,
        count: 1,
      });
      this.selected = null;
    }
    this.render();
  }

  render(): void {
    const state = this.session.state;
    const graph = this.session.graph;
    const positions = vertexPositions(graph);
    const badges = vertexBadges(state);
    this.root.innerHTML = "";
    this.root.classList.add("board", `layout-${layoutKind(graph)}`);

    const banner = document.createElement("div");
    banner.className = "banner";
    if (state.status === "finished" && state.outcome) {
      const at =
        state.outcome.vertex !== null ? ` at vertex ${state.outcome.vertex}` : "";
      banner.textContent = `${state.outcome.winner} win (round ${state.outcome.round}${at})`;
      banner.classList.add("banner-win");
      const meeting = firstUnguardedMeeting(state);
      if (meeting !== null) {
        banner.classList.add("banner-flash");
      }
    } else {
      banner.textContent = this.phaseLabel(state);
    }
    this.root.appendChild(banner);

    const counters = partCounters(state, graph);
    if (counters.length === 2) {
      const bar = document.createElement("div");
      bar.className = "side-counters";
      bar.textContent = counters
        .map(
          (c) =>
            `side ${c.part + 1}: r=${c.revs} s=${c.spies} covered=${c.covered}`,
        )
        .join("  |  ");
      this.root.appendChild(bar);
    }

    const field = document.createElement("div");
    field.className = "field";
    for (const badge of badges) {
      const el = document.createElement("div");
      el.className = "vertex";
      el.dataset.vertex = String(badge.vertex);
      if (badge.covered) el.classList.add("covered");
      if (badge.unguarded) el.classList.add("unguarded");
      if (this.selected === badge.vertex) el.classList.add("selected");
      el.style.left = `${(positions[badge.vertex].x * 100).toFixed(2)}%`;
      el.style.top = `${(positions[badge.vertex].y * 100).toFixed(2)}%`;
      el.innerHTML =
        `<span class="vid">${badge.vertex}</span>` +
        (badge.revs ? `<span class="revs">${badge.revs}</span>` : "") +
        (badge.spies ? `<span class="spies">${badge.spies}</span>` : "");
      el.addEventListener("click", () => this.onVertexClick(badge.vertex));
      field.appendChild(el);
    }
    this.root.appendChild(field);

    const pending = document.createElement("div");
    pending.className = "pending";
    const entries = this.session.composer.pending
      .map((e) => (e.from === null ? `+${e.count}@${e.to}` : `${e.from}->${e.to} x${e.count}`))
      .join(", ");
    pending.textContent = entries ? `pending: ${entries}` : "pending: (stay)";
    this.root.appendChild(pending);

    if (this.session.composer.lastHint) {
      const hint = document.createElement("div");
      hint.className = "hint";
      hint.textContent = this.session.composer.lastHint;
      this.root.appendChild(hint);
    }
  }
}
