/** Transient notification banners (conflict warnings, errors). */

export function showToast(
  container: HTMLElement,
  message: string,
  kind: "info" | "conflict" | "error" = "info",
  ttlMs = 4000,
): HTMLElement {
  const el = container.ownerDocument.createElement("div");
  el.className = `toast toast-${kind}`;
  el.setAttribute("role", "alert");
  el.textContent = message;
  container.appendChild(el);
  setTimeout(() => el.remove(), ttlMs);
  return el;
}
