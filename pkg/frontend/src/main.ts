import { ApiClient } from "./api.js";
import { App } from "./app.js";

const app = new App(document, {
  api: new ApiClient((input, init) => fetch(input, init)),
  openLink: (uri) => {
    window.open(uri, "_blank", "noopener");
  },
  nowMs: () => Date.now(),
  storage: window.sessionStorage,
});

// Dwell ends when the user comes back to the results page: the tab becomes
// visible again or the window regains focus (whichever happens first).
document.addEventListener("visibilitychange", () => {
  if (document.visibilityState === "visible") void app.onReturn();
});
window.addEventListener("focus", () => {
  void app.onReturn();
});
