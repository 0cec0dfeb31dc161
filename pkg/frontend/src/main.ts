// Entry point: picks an exercise, starts a session, and wires the board,
// hint stream, and replay view together.

import { ServiceClient } from "./api.js";
import { renderBoard, renderReplay } from "./board.js";
import { PlayModel } from "./play.js";
import { ReplayModel } from "./replay.js";
import { subscribeHints } from "./sse.js";

async function boot(): Promise<void> {
  const playRoot = document.getElementById("play");
  const replayRoot = document.getElementById("replay");
  const replayButton = document.getElementById("show-replay");
  if (!playRoot || !replayRoot || !replayButton) return;

  const client = new ServiceClient("");
  let model: PlayModel;
  try {
    const exercises = await client.listExercises();
    if (exercises.length === 0) throw new Error("no exercises available");
    model = await PlayModel.start(client, exercises[0].id, "web");
  } catch (err) {
    playRoot.textContent = `Service unreachable: ${err instanceof Error ? err.message : err}`;
    playRoot.className = "banner-error";
    return;
  }

  renderBoard(playRoot, model);
  const hints = subscribeHints(client.hintsUrl(model.state.sessionId), (t) =>
    model.addHint(t),
  );
  window.addEventListener("beforeunload", () => hints.close());

  replayButton.addEventListener("click", async () => {
    const doc = await client.replay(model.state.sessionId);
    renderReplay(replayRoot, new ReplayModel(doc));
  });
}

void boot();
