/** The two live panels: the query under review and the session progress. */

import { drawCurve } from "./curve.js";
import { drawScatter } from "./scatter.js";
import { SessionController, classLabels } from "./state.js";
import { showToast } from "./toast.js";
import { drawTree } from "./tree.js";

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** Current query: asset image or pool scatter, plus one button per class. */
export function buildQueryPanel(
  root: HTMLElement,
  controller: SessionController,
): void {
  const doc = root.ownerDocument;
  const panel = el(doc, "section", "query-panel");
  const title = el(doc, "h2", "query-title", "Current query");
  const stage = el(doc, "div", "query-stage");
  const buttons = el(doc, "div", "class-buttons");
  panel.append(title, stage, buttons);
  root.appendChild(panel);

  const render = () => {
    const state = controller.state;
    stage.replaceChildren();
    buttons.replaceChildren();
    if (!state) {
      return;
    }
    if (controller.complete || !controller.current) {
      title.textContent = "Session complete";
      stage.append(el(doc, "p", "done-note", "The query budget is spent."));
      return;
    }
    const query = controller.current;
    title.textContent = `Current query: point ${query.point}`;

    if (query.asset) {
      const img = el(doc, "img", "query-asset");
      img.src = query.asset;
      img.alt = `item ${query.point}`;
      stage.appendChild(img);
    } else {
      const canvas = el(doc, "canvas", "scatter-canvas");
      canvas.width = 420;
      canvas.height = 320;
      stage.appendChild(canvas);
      drawScatter(canvas, {
        features: state.features_2d,
        mapClasses: state.map_classes,
        confidence: state.confidence,
        classCount: state.class_count,
        labeled: new Set(Object.keys(state.labels).map(Number)),
        queryPoint: query.point,
      });
    }

    const posterior = el(doc, "p", "posterior-row");
    posterior.textContent =
      "posterior: [" +
      query.posterior_row.map((v) => v.toFixed(3)).join(", ") +
      "]";
    stage.appendChild(posterior);

    classLabels(state).forEach((name, cls) => {
      const button = el(doc, "button", "class-button", name);
      button.dataset.class = String(cls);
      button.addEventListener("click", () => void controller.submit(cls));
      buttons.appendChild(button);
    });
  };

  controller.subscribe((event) => {
    if (event.kind === "updated" || event.kind === "complete") {
      render();
    }
  });
  render();
}

/** Header counters, learning curve, labeled list, and the tree view. */
export function buildProgressPanel(
  root: HTMLElement,
  controller: SessionController,
): void {
  const doc = root.ownerDocument;
  const panel = el(doc, "section", "progress-panel");
  const header = el(doc, "div", "progress-header");
  const labeledCount = el(doc, "span", "labeled-count", "0 labeled");
  const subqueries = el(doc, "span", "subquery-counter", "0 subqueries");
  header.append(labeledCount, subqueries);
  const curveCanvas = el(doc, "canvas", "curve-canvas");
  curveCanvas.width = 420;
  curveCanvas.height = 220;
  const treeCanvas = el(doc, "canvas", "tree-canvas");
  treeCanvas.width = 420;
  treeCanvas.height = 240;
  const labeledList = el(doc, "ul", "labeled-list");
  panel.append(header, curveCanvas, treeCanvas, labeledList);
  root.appendChild(panel);

  const render = () => {
    const state = controller.state;
    if (!state) {
      return;
    }
    labeledCount.textContent = `${controller.labeledCount} labeled`;
    const used = controller.current?.subqueries_used ?? 0;
    subqueries.textContent = `${used} subqueries`;

    // accuracy when the server knows ground truth, labeled fraction otherwise
    const hasAccuracy = state.curve.accuracies.length > 0;
    const n = state.features_2d.length;
    const values = hasAccuracy
      ? state.curve.accuracies
      : state.query_log.map((_, i) => (i + 1) / Math.max(n, 1));
    drawCurve(curveCanvas, values, hasAccuracy ? "accuracy" : "labeled fraction");

    labeledList.replaceChildren();
    const names = classLabels(state);
    for (const rec of state.query_log) {
      labeledList.appendChild(
        el(doc, "li", "labeled-item", `point ${rec.point} -> ${names[rec.class]}`),
      );
    }

    if (state.tree) {
      drawTree(treeCanvas, {
        tree: state.tree,
        trace: controller.current?.trace ?? state.trace ?? null,
        labeledPoints: new Set(Object.keys(state.labels).map(Number)),
        queryPoint: controller.current?.point ?? null,
      });
    }
  };

  controller.subscribe((event) => {
    if (event.kind === "updated" || event.kind === "complete") {
      render();
    }
  });
  render();
}

/** Wire both panels plus the conflict/error toasts into `root`. */
export function buildApp(root: HTMLElement, controller: SessionController): void {
  const doc = root.ownerDocument;
  const toasts = el(doc, "div", "toasts");
  root.appendChild(toasts);
  controller.subscribe((event) => {
    if (event.kind === "conflict") {
      showToast(toasts, `Label conflict: ${event.message}`, "conflict");
    } else if (event.kind === "error") {
      showToast(toasts, event.message, "error");
    }
  });
  const columns = el(doc, "div", "columns");
  root.appendChild(columns);
  buildQueryPanel(columns, controller);
  buildProgressPanel(columns, controller);
}
