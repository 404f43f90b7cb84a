/**
 * Browser bootstrap: upload a DIMACS model (with optional name map), open a
 * session and drive it from click events. One active session per tab; every
 * mutation awaits the authoritative response before re-rendering.
 */

import { PropagationClient } from "./api.js";
import { SessionController } from "./controller.js";
import { parseNameMap } from "./names.js";
import { renderSession } from "./view.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing #${id}`);
  }
  return node as T;
}

export function startApp(): void {
  const client = new PropagationClient("");
  let controller: SessionController | null = null;

  const featureList = el<HTMLDivElement>("session");
  const status = el<HTMLDivElement>("status");

  function render(): void {
    if (controller === null) {
      featureList.innerHTML = "";
      return;
    }
    featureList.innerHTML = renderSession(controller.rows, controller.counts, controller.notice);
  }

  function showError(err: unknown): void {
    status.textContent = err instanceof Error ? err.message : String(err);
    status.className = "notice error";
  }

  el<HTMLButtonElement>("load").addEventListener("click", () => {
    void (async () => {
      try {
        status.textContent = "";
        status.className = "";
        const dimacs = el<HTMLTextAreaElement>("dimacs").value;
        const nameText = el<HTMLTextAreaElement>("names").value;
        const names = nameText.trim() === "" ? undefined : parseNameMap(nameText);
        const uploaded = await client.uploadModel(dimacs, names);
        controller = await SessionController.create(client, uploaded.model_id);
        status.textContent =
          `model ${uploaded.model_id}: ${uploaded.stats.num_vars} features, ` +
          `${uploaded.stats.num_clauses} constraints`;
        render();
      } catch (err) {
        showError(err);
      }
    })();
  });

  featureList.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const action = target.dataset["action"];
    const variable = Number(target.dataset["var"]);
    if (controller === null || action === undefined || Number.isNaN(variable)) {
      return;
    }
    void (async () => {
      try {
        if (action === "retract") {
          await controller.retract(variable);
        } else {
          await controller.toggle(variable, action as "select" | "exclude");
        }
        render();
      } catch (err) {
        showError(err);
      }
    })();
  });
}

startApp();
