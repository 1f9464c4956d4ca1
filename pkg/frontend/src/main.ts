import { httpApi } from "./api";
import { RatingForm, RaterKind } from "./ratingForm";
import { TaskForm } from "./taskForm";
import "./styles.css";

function requireParam(params: URLSearchParams, name: string): string {
  const value = params.get(name);
  if (!value) {
    throw new Error(`missing ?${name}= parameter`);
  }
  return value;
}

function boot(): void {
  const root = document.getElementById("app");
  if (!root) {
    return;
  }
  const params = new URLSearchParams(window.location.search);
  const view = params.get("view") ?? "task";
  const api = httpApi("");

  try {
    if (view === "rate") {
      const form = new RatingForm(root, {
        api,
        raterId: requireParam(params, "rater"),
        kind: (params.get("mode") ?? "crowd") as RaterKind,
      });
      void form.start();
    } else {
      const form = new TaskForm(root, {
        api,
        worker: requireParam(params, "worker"),
        batch: requireParam(params, "batch"),
      });
      void form.loadNextTask();
    }
  } catch (err) {
    root.innerHTML = `<div class="banner-error" role="alert"></div>`;
    const banner = root.querySelector(".banner-error");
    if (banner) {
      banner.textContent = String(err);
    }
  }
}

boot();
