import { App } from "./screens.js";

const root = document.getElementById("app");
if (root) {
  const app = new App(root);
  app.start();
  // handle for debugging from the console
  (globalThis as { foodcalApp?: App }).foodcalApp = app;
}
