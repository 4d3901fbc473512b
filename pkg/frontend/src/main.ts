/** App bootstrap: attach to the session in the URL hash, or create one.
 *
 * The hash is the only client-side state; reloading rebuilds everything
 * from GET /state.
 */

import { ApiClient } from "./api.js";
import { buildApp } from "./panels.js";
import { SessionController } from "./state.js";

async function showCreateForm(root: HTMLElement, api: ApiClient): Promise<void> {
  const doc = root.ownerDocument;
  const form = doc.createElement("form");
  form.className = "create-form";
  const select = doc.createElement("select");
  select.name = "dataset";
  for (const info of await api.datasets()) {
    const option = doc.createElement("option");
    option.value = info.name;
    option.textContent = `${info.name} (n=${info.n}, c=${info.class_count})`;
    select.appendChild(option);
  }
  const strategy = doc.createElement("select");
  strategy.name = "strategy";
  for (const kind of ["hse", "eer_breadth_first", "eer_random_subsample", "random", "margin", "entropy"]) {
    const option = doc.createElement("option");
    option.value = kind;
    option.textContent = kind;
    strategy.appendChild(option);
  }
  const button = doc.createElement("button");
  button.type = "submit";
  button.textContent = "Start labeling";
  form.append(select, strategy, button);
  root.appendChild(form);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void api
      .createSession({
        dataset: select.value,
        config: { strategy: strategy.value },
      })
      .then((created) => {
        window.location.hash = created.id;
        window.location.reload();
      });
  });
}

export async function boot(root: HTMLElement, api = new ApiClient()): Promise<void> {
  const sessionId = window.location.hash.replace(/^#/, "");
  root.replaceChildren();
  if (!sessionId) {
    await showCreateForm(root, api);
    return;
  }
  const controller = new SessionController(api, sessionId);
  buildApp(root, controller);
  await controller.refresh();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void boot(document.getElementById("app") as HTMLElement);
}
