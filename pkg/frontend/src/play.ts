// Play view model: one column per slider, discrete position cycling, and a
// validate button that flashes green or red from the server's verdict only.

import { ServiceClient, ServiceError, type ExerciseDoc } from "./api.js";
import type { HintTrigger } from "./sse.js";

export type Feedback = "none" | "green" | "red";

export interface PlayState {
  exercise: ExerciseDoc;
  sessionId: string;
  vector: number[];
  feedback: Feedback;
  hints: HintTrigger[];
  error: string | null;
  busy: boolean;
}

export class PlayModel {
  state: PlayState;
  private listeners: Array<(s: PlayState) => void> = [];

  constructor(
    private client: ServiceClient,
    exercise: ExerciseDoc,
    sessionId: string,
    initialVector: number[],
  ) {
    this.state = {
      exercise,
      sessionId,
      vector: [...initialVector],
      feedback: "none",
      hints: [],
      error: null,
      busy: false,
    };
  }

  static async start(
    client: ServiceClient,
    exerciseId: string,
    studentId: string,
  ): Promise<PlayModel> {
    const exercise = await client.getExercise(exerciseId);
    const session = await client.createSession(exerciseId, studentId);
    return new PlayModel(client, exercise, session.session_id, session.initial_vector);
  }

  onChange(fn: (s: PlayState) => void): void {
    this.listeners.push(fn);
  }

  private emit(): void {
    for (const fn of this.listeners) fn(this.state);
  }

  /** Position the given slider would land on if cycled once (wraps). */
  nextPosition(sliderIndex: number): number {
    const n = this.state.exercise.sliders[sliderIndex].surfaces.length;
    return (this.state.vector[sliderIndex] % n) + 1;
  }

  /** Cycle one slider to its next position via the server. */
  async cycle(sliderIndex: number): Promise<void> {
    return this.moveTo(sliderIndex, this.nextPosition(sliderIndex));
  }

  /** Move one slider to an explicit position; snaps back on rejection. */
  async moveTo(sliderIndex: number, newPosition: number): Promise<void> {
    if (this.state.busy) return;
    this.state = { ...this.state, busy: true, feedback: "none" };
    this.emit();
    try {
      const res = await this.client.move(this.state.sessionId, sliderIndex, newPosition);
      this.state = { ...this.state, vector: res.vector, busy: false, error: null };
    } catch (err) {
      // 409 = illegal move: leave the board as the server last confirmed it
      if (err instanceof ServiceError && err.status === 409) {
        this.state = { ...this.state, busy: false };
      } else {
        this.state = { ...this.state, busy: false, error: describe(err) };
      }
    }
    this.emit();
  }

  async validate(): Promise<void> {
    if (this.state.busy) return;
    this.state = { ...this.state, busy: true };
    this.emit();
    try {
      const res = await this.client.validate(this.state.sessionId);
      this.state = {
        ...this.state,
        feedback: res.result === "correct" ? "green" : "red",
        busy: false,
        error: null,
      };
    } catch (err) {
      this.state = { ...this.state, busy: false, error: describe(err) };
    }
    this.emit();
  }

  /** Merge an asynchronous hint trigger into the view state. */
  addHint(trigger: HintTrigger): void {
    this.state = { ...this.state, hints: [...this.state.hints, trigger] };
    this.emit();
  }

  dismissHint(index: number): void {
    const hints = this.state.hints.filter((_, i) => i !== index);
    this.state = { ...this.state, hints };
    this.emit();
  }

  /** Surface forms currently selected, in sentence order. */
  sentence(): string {
    return this.state.exercise.sliders
      .map((s, i) => s.surfaces[this.state.vector[i] - 1])
      .join(" ");
  }
}

function describe(err: unknown): string {
  if (err instanceof ServiceError) return `service error ${err.status}: ${err.message}`;
  return err instanceof Error ? err.message : String(err);
}
