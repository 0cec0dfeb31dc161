// Minimal fetch-based server-sent-events reader for the hint stream.
// EventSource would also work in browsers, but a fetch reader keeps the
// parser testable and lets us pass the same fetch implementation used by
// the API client.

import type { FetchLike } from "./api.js";

export interface HintTrigger {
  scenario: string;
  session_id: string;
  step: number;
  payload: Record<string, unknown>;
}

export interface HintSubscription {
  close(): void;
  done: Promise<void>;
}

/** Parse one SSE frame ("event: ...\ndata: ...") into a trigger, if any. */
export function parseEventFrame(frame: string): HintTrigger | null {
  let event = "message";
  const dataLines: string[] = [];
  for (const line of frame.split("\n")) {
    if (line.startsWith("event:")) event = line.slice(6).trim();
    else if (line.startsWith("data:")) dataLines.push(line.slice(5).trim());
  }
  if (event !== "trigger" || dataLines.length === 0) return null;
  try {
    return JSON.parse(dataLines.join("\n")) as HintTrigger;
  } catch {
    return null;
  }
}

export function subscribeHints(
  url: string,
  onTrigger: (t: HintTrigger) => void,
  fetchImpl: FetchLike = (u, init) => fetch(u, init),
): HintSubscription {
  const controller = new AbortController();

  const done = (async () => {
    let res: Response;
    try {
      res = await fetchImpl(url, { signal: controller.signal });
    } catch {
      return; // aborted before connecting, or server unreachable
    }
    if (!res.ok || !res.body) return;
    const reader = res.body.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    try {
      for (;;) {
        const { done: eof, value } = await reader.read();
        if (eof) break;
        buffer += decoder.decode(value, { stream: true });
        let sep;
        while ((sep = buffer.indexOf("\n\n")) >= 0) {
          const frame = buffer.slice(0, sep);
          buffer = buffer.slice(sep + 2);
          const trigger = parseEventFrame(frame);
          if (trigger) onTrigger(trigger);
        }
      }
    } catch {
      // stream aborted by close(); nothing to do
    }
  })();

  return { close: () => controller.abort(), done };
}
