// Replay view model: a scrubber over the recorded session plus a distance
// strip. Frame construction is a pure function of the replay payload, so the
// same payload always renders the same frames.

import type { ReplayDoc, ReplayValidation } from "./api.js";

export interface Frame {
  step: number;
  vector: number[];
  sentence: string;
  distance: number;
  goldChanged: boolean;
  validations: ReplayValidation[];
}

export function framesFromReplay(doc: ReplayDoc): Frame[] {
  return doc.points.map((p) => ({
    step: p.step,
    vector: [...p.vector],
    sentence: p.sentence,
    distance: p.distance,
    goldChanged: p.gold_changed,
    validations: doc.validations.filter((v) => v.step === p.step),
  }));
}

export class ReplayModel {
  readonly frames: Frame[];
  private index = 0;
  private listeners: Array<(f: Frame) => void> = [];

  constructor(doc: ReplayDoc) {
    this.frames = framesFromReplay(doc);
    if (this.frames.length === 0) {
      throw new Error("replay payload has no states");
    }
  }

  get current(): Frame {
    return this.frames[this.index];
  }

  get position(): number {
    return this.index;
  }

  onChange(fn: (f: Frame) => void): void {
    this.listeners.push(fn);
  }

  seek(step: number): Frame {
    this.index = Math.min(Math.max(step, 0), this.frames.length - 1);
    for (const fn of this.listeners) fn(this.current);
    return this.current;
  }

  next(): Frame {
    return this.seek(this.index + 1);
  }

  prev(): Frame {
    return this.seek(this.index - 1);
  }

  /** Distance per step for the side strip. */
  distances(): number[] {
    return this.frames.map((f) => f.distance);
  }

  /** Steps whose nearest solution differs from the previous step's. */
  goldChangedSteps(): number[] {
    return this.frames.filter((f) => f.goldChanged).map((f) => f.step);
  }
}
