/** DOM wiring for the console page; all logic lives in the modules. */

import { ApiError, BridgeApi } from "./api.js";
import { openStream } from "./stream.js";
import {
  bannerVisible,
  ConsoleEvent,
  ConsoleState,
  controlsEnabled,
  INITIAL_STATE,
  reduce,
  teleopEnabled,
} from "./state.js";
import { Direction, keyToDirection, STOP_COMMAND, teleopCommand } from "./teleop.js";
import { toRgba } from "./pgm.js";
import { CONFIG_OPTIONS, Mode, PipelineConfig } from "./types.js";
import { SocketLike, UartLink } from "./uart.js";

const api = new BridgeApi("");
const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (el === null) throw new Error(`missing #${id}`);
  return el as T;
};

let state: ConsoleState = INITIAL_STATE;

function dispatch(event: ConsoleEvent): void {
  state = reduce(state, event);
  render();
}

// -- rendering ---------------------------------------------------------------

const canvas = $<HTMLCanvasElement>("view");
const ctx = canvas.getContext("2d");

function render(): void {
  $("banner").style.display = bannerVisible(state) ? "block" : "none";
  $("fps").textContent = state.streamFps.toFixed(1);
  $("mode").textContent = state.mode;
  $("reply").textContent = state.lastReply;

  const enabled = controlsEnabled(state);
  for (const el of document.querySelectorAll<HTMLButtonElement>("button[data-mode]")) {
    el.disabled = !enabled;
    el.classList.toggle("active", el.dataset.mode === state.mode);
  }
  const padEnabled = teleopEnabled(state);
  for (const el of document.querySelectorAll<HTMLButtonElement>("button[data-dir], #stop")) {
    (el as HTMLButtonElement).disabled = !padEnabled;
  }
  for (const field of Object.keys(CONFIG_OPTIONS) as (keyof PipelineConfig)[]) {
    const select = $<HTMLSelectElement>(`cfg-${field}`);
    select.disabled = !enabled;
    if (state.config && select.value !== state.config[field]) select.value = state.config[field];
  }
  const m = state.lastMetrics;
  $("metrics").textContent = m
    ? `visibility ${m.visibility_fraction.toFixed(2)}  ` +
      `center err ${m.mean_abs_center_err.toFixed(1)}px  ` +
      `converged ${m.convergence_time === null ? "-" : m.convergence_time.toFixed(1) + "s"}  ` +
      `sent ${m.commands_sent}/${m.frames_processed}`
    : "no metrics yet";
}

// -- camera stream -----------------------------------------------------------

openStream(
  "/stream",
  {
    onFrame(frame, fps) {
      if (canvas.width !== frame.width || canvas.height !== frame.height) {
        canvas.width = frame.width;
        canvas.height = frame.height;
      }
      ctx?.putImageData(new ImageData(toRgba(frame), frame.width, frame.height), 0, 0);
      dispatch({ kind: "stream-fps", fps });
    },
    onStatus(status) {
      dispatch({ kind: "link", status });
    },
  },
);

// -- command link ------------------------------------------------------------

const wsUrl = `ws://${location.host}/uart`;
const link = new UartLink(wsUrl, (url) => new WebSocket(url) as unknown as SocketLike);

async function sendTeleop(direction: Direction): Promise<void> {
  if (!teleopEnabled(state)) {
    dispatch({ kind: "reply", text: "teleop off (switch mode first)" });
    return;
  }
  const config = state.config;
  const line = teleopCommand(direction, config ? config.response : "medium");
  try {
    const reply = await link.send(line);
    dispatch({ kind: "reply", text: `${line} -> ${reply}` });
  } catch (err) {
    dispatch({ kind: "reply", text: String(err) });
  }
}

for (const el of document.querySelectorAll<HTMLButtonElement>("button[data-dir]")) {
  el.addEventListener("click", () => void sendTeleop(el.dataset.dir as Direction));
}
$("stop").addEventListener("click", () => {
  if (!teleopEnabled(state)) return;
  void link.send(STOP_COMMAND).then(
    (reply) => dispatch({ kind: "reply", text: `${STOP_COMMAND} -> ${reply}` }),
    (err) => dispatch({ kind: "reply", text: String(err) }),
  );
});
document.addEventListener("keydown", (event) => {
  const direction = keyToDirection(event.key);
  if (direction !== null) {
    event.preventDefault();
    void sendTeleop(direction);
  }
});

// -- mode and config ---------------------------------------------------------

for (const el of document.querySelectorAll<HTMLButtonElement>("button[data-mode]")) {
  el.addEventListener("click", async () => {
    try {
      const result = await api.setMode(el.dataset.mode as Mode);
      dispatch({ kind: "mode", mode: result.mode });
    } catch (err) {
      dispatch({ kind: "reply", text: String(err) });
    }
  });
}

for (const field of Object.keys(CONFIG_OPTIONS) as (keyof PipelineConfig)[]) {
  const select = $<HTMLSelectElement>(`cfg-${field}`);
  for (const option of CONFIG_OPTIONS[field]) {
    const el = document.createElement("option");
    el.value = option;
    el.textContent = option;
    select.append(el);
  }
  select.addEventListener("change", async () => {
    try {
      const confirmed = await api.putConfig({ [field]: select.value } as Partial<PipelineConfig>);
      dispatch({ kind: "config", config: confirmed });
      $(`err-${field}`).textContent = "";
    } catch (err) {
      $(`err-${field}`).textContent =
        err instanceof ApiError && err.fieldError ? err.fieldError.message : String(err);
      if (state.config) select.value = state.config[field]; // back to confirmed
    }
  });
}

// -- polling -----------------------------------------------------------------

async function refresh(): Promise<void> {
  try {
    const metrics = await api.getMetrics();
    dispatch({ kind: "metrics", metrics });
  } catch {
    // the stream handler owns link status; a missed poll is not a loss
  }
}
setInterval(() => void refresh(), 1000);

void api
  .getConfig()
  .then((config) => dispatch({ kind: "config", config }))
  .then(() => refresh());
render();
