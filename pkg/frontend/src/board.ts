// DOM rendering for the play and replay views. Rendering reads model state
// only; all game logic lives in the models.

import type { PlayModel } from "./play.js";
import type { ReplayModel } from "./replay.js";

export function renderBoard(root: HTMLElement, model: PlayModel): void {
  const draw = () => {
    const { exercise, vector, feedback, hints, error } = model.state;
    root.innerHTML = "";
    root.className = `board feedback-${feedback}`;

    if (error) {
      const banner = el("div", "banner-error", error);
      root.appendChild(banner);
    }

    const row = el("div", "sliders");
    exercise.sliders.forEach((slider, i) => {
      const col = el("div", "slider-column");
      col.dataset.label = slider.label;
      slider.surfaces.forEach((surface, j) => {
        const cell = el(
          "button",
          j + 1 === vector[i] ? "cell selected" : "cell",
          surface,
        );
        cell.addEventListener("click", () => void model.moveTo(i, j + 1));
        col.appendChild(cell);
      });
      row.appendChild(col);
    });
    root.appendChild(row);

    const validate = el("button", "validate", "Validate");
    validate.addEventListener("click", () => void model.validate());
    root.appendChild(validate);

    const toasts = el("div", "hints");
    hints.forEach((hint, i) => {
      const toast = el("div", "hint-toast", hintText(hint.scenario));
      toast.addEventListener("click", () => model.dismissHint(i));
      toasts.appendChild(toast);
    });
    root.appendChild(toasts);
  };
  model.onChange(draw);
  draw();
}

const HINT_TEXT: Record<string, string> = {
  diverge_after_converge: "You were closer a moment ago. Want to step back?",
  far_from_solution: "Try fixing one word at a time.",
  strategy_hint: "Have another look at the verb.",
  engagement: "Take your time: move a slider, then validate.",
};

function hintText(scenario: string): string {
  return HINT_TEXT[scenario] ?? "Hint available.";
}

export function renderReplay(root: HTMLElement, model: ReplayModel): void {
  const draw = () => {
    const frame = model.current;
    root.innerHTML = "";
    root.className = "replay";

    const sentence = el("div", "sentence", frame.sentence);
    root.appendChild(sentence);

    const strip = el("div", "distance-strip");
    model.frames.forEach((f) => {
      const tick = el("span", "tick", String(f.distance));
      if (f.step === frame.step) tick.className += " active";
      if (f.goldChanged) tick.className += " gold-changed";
      if (f.validations.length > 0) tick.className += " validated";
      tick.addEventListener("click", () => model.seek(f.step));
      strip.appendChild(tick);
    });
    root.appendChild(strip);

    const controls = el("div", "controls");
    const prev = el("button", "prev", "<");
    prev.addEventListener("click", () => model.prev());
    const label = el("span", "position", `${frame.step} / ${model.frames.length - 1}`);
    const next = el("button", "next", ">");
    next.addEventListener("click", () => model.next());
    controls.append(prev, label, next);
    root.appendChild(controls);
  };
  model.onChange(draw);
  draw();
}

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}
