// @vitest-environment jsdom
import { describe, expect, it } from "vitest";

import { ServiceClient } from "../src/api.js";
import { renderBoard, renderReplay } from "../src/board.js";
import { PlayModel } from "../src/play.js";
import { ReplayModel } from "../src/replay.js";
import { MockService } from "./mockService.js";

async function mountedGame() {
  const service = new MockService();
  const client = new ServiceClient("", service.fetch);
  const model = await PlayModel.start(client, "EX-A", "web");
  const root = document.createElement("div");
  renderBoard(root, model);
  return { client, model, root };
}

function click(el: Element | null) {
  expect(el).not.toBeNull();
  (el as HTMLElement).click();
}

async function settle() {
  // let the model's async handlers and re-render run
  await new Promise((r) => setTimeout(r, 0));
}

describe("play board rendering", () => {
  it("renders one column per slider with the selection highlighted", async () => {
    const { root } = await mountedGame();
    const columns = root.querySelectorAll(".slider-column");
    expect(columns).toHaveLength(3);
    const selected = [...root.querySelectorAll(".cell.selected")].map(
      (c) => c.textContent,
    );
    expect(selected).toEqual(["le", "chat", "dorment"]); // vector [1,1,2]
  });

  it("turns green after validating a gold vector", async () => {
    const { root } = await mountedGame();
    click(root.querySelectorAll(".slider-column")[2].querySelectorAll(".cell")[0]);
    await settle();
    click(root.querySelector(".validate"));
    await settle();
    expect(root.className).toContain("feedback-green");
  });

  it("turns red after validating a non-gold vector, board unchanged", async () => {
    const { root, model } = await mountedGame();
    click(root.querySelector(".validate"));
    await settle();
    expect(root.className).toContain("feedback-red");
    expect(model.state.vector).toEqual([1, 1, 2]);
  });

  it("shows hint toasts and dismisses them on click", async () => {
    const { root, model } = await mountedGame();
    model.addHint({ scenario: "strategy_hint", session_id: "s", step: 2, payload: {} });
    expect(root.querySelectorAll(".hint-toast")).toHaveLength(1);
    click(root.querySelector(".hint-toast"));
    expect(root.querySelectorAll(".hint-toast")).toHaveLength(0);
  });
});

describe("replay rendering", () => {
  it("renders the scrubber with one tick per frame", async () => {
    const { client, model } = await mountedGame();
    await model.moveTo(0, 2);
    const replay = new ReplayModel(await client.replay(model.state.sessionId));
    const root = document.createElement("div");
    renderReplay(root, replay);
    expect(root.querySelectorAll(".tick")).toHaveLength(2);
    click(root.querySelector(".next"));
    expect(root.querySelector(".position")?.textContent).toBe("1 / 1");
  });
});
