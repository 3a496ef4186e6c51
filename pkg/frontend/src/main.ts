/** Browser entry point: resolve the annotator name and mount the app. */
import { ApiClient } from "./api.js";
import { AnnotationApp } from "./app.js";

function annotatorName(): string {
  const stored = window.localStorage.getItem("gerchex.annotator");
  if (stored) return stored;
  const entered = window.prompt("Annotator-Kürzel:")?.trim() || "anonymous";
  window.localStorage.setItem("gerchex.annotator", entered);
  return entered;
}

window.addEventListener("DOMContentLoaded", () => {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  const app = new AnnotationApp(root, new ApiClient(annotatorName()));
  void app.start();
});
