// Typed client for the slider-game service. All correctness signals come
// from the server; the client never checks grammaticality locally.

export interface SliderDoc {
  label: string;
  surfaces: string[];
}

export interface ExerciseDoc {
  id: string;
  sliders: SliderDoc[];
}

export interface ExerciseSummary {
  id: string;
  n_sliders: number;
}

export interface SessionDoc {
  session_id: string;
  initial_vector: number[];
}

export type ValidationResult = "correct" | "incorrect";

export interface ReplayPoint {
  step: number;
  distance: number;
  gold_changed: boolean;
  vector: number[];
  sentence: string;
}

export interface ReplayValidation {
  step: number;
  result: ValidationResult;
  revalidation: boolean;
}

export interface ReplayDoc {
  session_id: string;
  student_id: string;
  exercise_id: string;
  initial_vector: number[];
  points: ReplayPoint[];
  validations: ReplayValidation[];
}

export class ServiceError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function asJson<T>(res: Response): Promise<T> {
  if (!res.ok) {
    let detail = res.statusText;
    try {
      const body = await res.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ServiceError(res.status, detail);
  }
  return res.json() as Promise<T>;
}

export class ServiceClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  listExercises(): Promise<ExerciseSummary[]> {
    return this.get("/exercises");
  }

  getExercise(id: string): Promise<ExerciseDoc> {
    return this.get(`/exercises/${encodeURIComponent(id)}`);
  }

  createSession(exerciseId: string, studentId: string): Promise<SessionDoc> {
    return this.post("/sessions", {
      exercise_id: exerciseId,
      student_id: studentId,
    });
  }

  move(sessionId: string, sliderIndex: number, newPosition: number): Promise<{ vector: number[] }> {
    return this.post(`/sessions/${encodeURIComponent(sessionId)}/move`, {
      slider_index: sliderIndex,
      new_position: newPosition,
    });
  }

  validate(sessionId: string): Promise<{ result: ValidationResult }> {
    return this.post(`/sessions/${encodeURIComponent(sessionId)}/validate`);
  }

  replay(sessionId: string): Promise<ReplayDoc> {
    return this.get(`/sessions/${encodeURIComponent(sessionId)}/replay`);
  }

  hintsUrl(sessionId: string): string {
    return `${this.baseUrl}/sessions/${encodeURIComponent(sessionId)}/hints`;
  }

  private get<T>(path: string): Promise<T> {
    return this.fetchImpl(this.baseUrl + path).then((res) => asJson<T>(res));
  }

  private post<T>(path: string, body?: unknown): Promise<T> {
    return this.fetchImpl(this.baseUrl + path, {
      method: "POST",
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    }).then((res) => asJson<T>(res));
  }
}
