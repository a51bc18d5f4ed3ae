// Minimal deterministic SVG string builder: no DOM, stable attribute order.

export type Attrs = Record<string, string | number>;

export function escapeText(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function renderAttrs(attrs: Attrs): string {
  return Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${escapeText(String(v))}"`)
    .join("");
}

export function el(tag: string, attrs: Attrs = {}, children: string[] = []): string {
  const body = children.join("");
  return body === ""
    ? `<${tag}${renderAttrs(attrs)}/>`
    : `<${tag}${renderAttrs(attrs)}>${body}</${tag}>`;
}

export function text(content: string, attrs: Attrs = {}): string {
  return el("text", attrs, [escapeText(content)]);
}

export function svgDocument(width: number, height: number, children: string[]): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">` +
    children.join("") +
    `</svg>\n`
  );
}

/** Affine map from a data interval onto a pixel interval. */
export function scaleLinear(d0: number, d1: number, p0: number, p1: number) {
  const span = d1 - d0 || 1;
  return (x: number) => p0 + ((x - d0) / span) * (p1 - p0);
}

export function scaleLog(d0: number, d1: number, p0: number, p1: number) {
  const base = scaleLinear(Math.log10(d0), Math.log10(d1), p0, p1);
  return (x: number) => base(Math.log10(x));
}

export function polyline(points: Array<[number, number]>, attrs: Attrs): string {
  const pts = points.map(([x, y]) => `${round2(x)},${round2(y)}`).join(" ");
  return el("polyline", { points: pts, fill: "none", ...attrs });
}

function round2(x: number): number {
  return Math.round(x * 100) / 100;
}

/** Short human label: 3-decimal mantissa in scientific notation. */
export function label3(value: number): string {
  return value.toExponential(3);
}
