// In-memory stand-in for the game service, speaking the same HTTP shapes.
// Grammaticality is a fixed gold set for the three-slider reference
// exercise, mirroring the server's behaviour for scripted tests.

import type { ExerciseDoc, ReplayDoc, ReplayPoint, ReplayValidation } from "../src/api.js";

export const EXERCISE: ExerciseDoc = {
  id: "EX-A",
  sliders: [
    { label: "det", surfaces: ["le", "la", "les"] },
    { label: "nom", surfaces: ["chat", "chats", "chatte"] },
    { label: "ver", surfaces: ["dort", "dorment"] },
  ],
};

export const GOLD_VECTORS = [
  [1, 1, 1],
  [2, 3, 1],
  [3, 2, 2],
];

export const INITIAL_VECTOR = [1, 1, 2];

function isGold(v: number[]): boolean {
  return GOLD_VECTORS.some((g) => g.every((x, i) => x === v[i]));
}

function distance(v: number[]): number {
  return Math.min(
    ...GOLD_VECTORS.map((g) => g.reduce((acc, x, i) => acc + (x === v[i] ? 0 : 1), 0)),
  );
}

interface MoveRecord {
  vector: number[];
}

export class MockService {
  vector = [...INITIAL_VECTOR];
  moves: MoveRecord[] = [];
  validations: ReplayValidation[] = [];
  requests: string[] = [];

  fetch = async (url: string, init?: RequestInit): Promise<Response> => {
    this.requests.push(`${init?.method ?? "GET"} ${url}`);
    const path = url.replace(/^https?:\/\/[^/]+/, "");

    if (path === "/exercises") {
      return json([{ id: EXERCISE.id, n_sliders: EXERCISE.sliders.length }]);
    }
    if (path === `/exercises/${EXERCISE.id}`) {
      return json(EXERCISE);
    }
    if (path === "/sessions" && init?.method === "POST") {
      return json({ session_id: "mock-session", initial_vector: [...this.vector] });
    }
    if (path === "/sessions/mock-session/move") {
      const body = JSON.parse(String(init?.body));
      const i = body.slider_index;
      const pos = body.new_position;
      if (i < 0 || i >= EXERCISE.sliders.length) {
        return json({ detail: "illegal move: no such slider" }, 409);
      }
      if (pos < 1 || pos > EXERCISE.sliders[i].surfaces.length) {
        return json({ detail: "illegal move: position out of range" }, 409);
      }
      if (this.vector[i] === pos) {
        return json({ detail: "illegal move: slider already there" }, 409);
      }
      this.vector = this.vector.map((x, j) => (j === i ? pos : x));
      this.moves.push({ vector: [...this.vector] });
      return json({ vector: [...this.vector] });
    }
    if (path === "/sessions/mock-session/validate") {
      const result = isGold(this.vector) ? "correct" : "incorrect";
      this.validations.push({
        step: this.moves.length,
        result,
        revalidation: false,
      });
      // correctness only: no per-slider disclosure
      return json({ result });
    }
    if (path === "/sessions/mock-session/replay") {
      const vectors = [INITIAL_VECTOR, ...this.moves.map((m) => m.vector)];
      const points: ReplayPoint[] = vectors.map((v, step) => ({
        step,
        distance: distance(v),
        gold_changed: false,
        vector: [...v],
        sentence: v.map((p, i) => EXERCISE.sliders[i].surfaces[p - 1]).join(" "),
      }));
      const doc: ReplayDoc = {
        session_id: "mock-session",
        student_id: "web",
        exercise_id: EXERCISE.id,
        initial_vector: [...INITIAL_VECTOR],
        points,
        validations: [...this.validations],
      };
      return json(doc);
    }
    return json({ detail: "not found" }, 404);
  };
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}
