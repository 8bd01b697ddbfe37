// Rendering: the quiver as SVG (columns by node, rows by spectral
// parameter, frozen vertices boxed) and polynomials from the canonical
// JSON term list with sub/superscript formatting.  Pure string builders,
// so the tests can run them without a DOM.

import { MonoEntry, PolyJson, Snapshot, Vertex } from "./protocol.js";
import { vertexKey, isFrozen } from "./model.js";

const COL_W = 110;
const ROW_H = 46;
const PAD = 54;

export interface LayoutPoint {
  vertex: Vertex;
  x: number;
  y: number;
  frozen: boolean;
}

export function layoutVertices(snapshot: Snapshot): LayoutPoint[] {
  const nodes = Array.from(new Set(snapshot.window.vertices.map(([i]) => i))).sort((a, b) => a - b);
  const rMax = Math.max(...snapshot.window.vertices.map(([, r]) => r));
  return snapshot.window.vertices.map((v) => ({
    vertex: v,
    x: PAD + nodes.indexOf(v[0]) * COL_W,
    y: PAD + (rMax - v[1]) * (ROW_H / 2),
    frozen: isFrozen(snapshot, v),
  }));
}

function arrowPath(a: LayoutPoint, b: LayoutPoint): string {
  const dx = b.x - a.x;
  const dy = b.y - a.y;
  const len = Math.hypot(dx, dy) || 1;
  const trim = 16;
  const x1 = a.x + (dx / len) * trim;
  const y1 = a.y + (dy / len) * trim;
  const x2 = b.x - (dx / len) * trim;
  const y2 = b.y - (dy / len) * trim;
  return `M ${x1.toFixed(1)} ${y1.toFixed(1)} L ${x2.toFixed(1)} ${y2.toFixed(1)}`;
}

export function quiverSvg(snapshot: Snapshot, highlight: Vertex | null): string {
  if (snapshot.window.vertices.length === 0) {
    return `<div class="empty-state">no vertices in this window</div>`;
  }
  const points = layoutVertices(snapshot);
  const byKey = new Map(points.map((p) => [vertexKey(p.vertex), p]));
  const width = Math.max(...points.map((p) => p.x)) + PAD;
  const height = Math.max(...points.map((p) => p.y)) + PAD;
  const parts: string[] = [];
  parts.push(
    `<svg viewBox="0 0 ${width} ${height}" xmlns="http://www.w3.org/2000/svg">`,
    `<defs><marker id="arrow" viewBox="0 0 8 8" refX="7" refY="4" markerWidth="7" markerHeight="7" orient="auto-start-reverse">` +
      `<path d="M 0 0 L 8 4 L 0 8 z" fill="#555"/></marker></defs>`,
  );
  for (const [from, to, mult] of snapshot.arrows) {
    const a = byKey.get(vertexKey(from));
    const b = byKey.get(vertexKey(to));
    if (!a || !b) continue;
    const cls = mult > 1 ? "arrow double" : "arrow";
    parts.push(`<path class="${cls}" d="${arrowPath(a, b)}" marker-end="url(#arrow)"/>`);
  }
  for (const p of points) {
    const key = vertexKey(p.vertex);
    const selected = highlight && vertexKey(highlight) === key;
    const cls = ["vertex", p.frozen ? "frozen" : "mutable", selected ? "highlight" : ""].join(" ").trim();
    const shape = p.frozen
      ? `<rect x="${p.x - 26}" y="${p.y - 13}" width="52" height="26" rx="3"/>`
      : `<ellipse cx="${p.x}" cy="${p.y}" rx="27" ry="14"/>`;
    parts.push(
      `<g class="${cls}" data-vertex="${key}">${shape}` +
        `<text x="${p.x}" y="${p.y + 4}" text-anchor="middle">(${p.vertex[0]},${p.vertex[1]})</text></g>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}

// --- polynomial formatting --------------------------------------------------

function escapeHtml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function factorHtml(entry: MonoEntry): string {
  let name: string;
  let exp: number;
  if (entry[0] === "f") {
    name = `f<sub>${entry[1]}</sub>`;
    exp = entry[2];
  } else {
    name = `z<sub>${entry[0]},${entry[1]}</sub>`;
    exp = entry[2];
  }
  return exp === 1 ? name : `${name}<sup>${exp}</sup>`;
}

function tPowerHtml(tHalf: number, coeff: string): string {
  const absCoeff = coeff.replace(/^-/, "");
  const parts: string[] = [];
  if (absCoeff !== "1") parts.push(escapeHtml(absCoeff));
  if (tHalf !== 0) {
    const power = tHalf % 2 === 0 ? `${tHalf / 2}` : `${tHalf}/2`;
    parts.push(power === "1" ? "t" : `t<sup>${power}</sup>`);
  }
  return parts.join(" ");
}

/** One term of the canonical list -> inline HTML. */
export function termHtml(term: { t_half: number; coeff: string; mono: MonoEntry[] }, basis: string): string {
  const letter = basis === "Y" ? "Y" : basis === "u" ? "u" : "z";
  const mono = term.mono
    .map((entry) =>
      entry[0] === "f" ? factorHtml(entry) : factorHtml(entry).replace("z<sub>", `${letter}<sub>`),
    )
    .join(" ");
  const scalar = tPowerHtml(term.t_half, term.coeff);
  const sign = term.coeff.startsWith("-") ? "− " : "";
  if (!mono) return sign + (scalar || "1");
  if (!scalar) return sign + mono;
  return `${sign}${scalar} ${mono}`;
}

/** The whole canonical term list -> HTML, terms joined by plus signs. */
export function polyHtml(poly: PolyJson): string {
  if (poly.terms.length === 0) return "0";
  return poly.terms.map((t) => termHtml(t, poly.basis)).join(" + ").replace(/\+ − /g, "− ");
}

export function degreeBadge(multidegree: number[] | null): string {
  if (!multidegree) return "";
  const parts: string[] = [];
  multidegree.forEach((d, idx) => {
    for (let c = 0; c < d; c += 1) parts.push(`e<sub>${idx + 1}</sub>`);
  });
  return parts.length ? parts.join(" + ") : "0";
}
