import init, { potential, spin_levels, spin_relaxation, husimi_snapshot } from "./pkg/wehrlsim_web.js";

const TAU = 10;
const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"];

const num = (id) => parseFloat(document.getElementById(id).value);
const int = (id) => parseInt(document.getElementById(id).value, 10);

function report(e) {
  document.getElementById("error").textContent = e ? String(e.message || e) : "";
}

function plotLines(canvas, xs, series, hlines = []) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 40;
  ctx.clearRect(0, 0, w, h);
  const ys = series.flat().concat(hlines).filter(Number.isFinite);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (y1 === y0) { y0 -= 1; y1 += 1; }
  const px = (x) => pad + (x - x0) / (x1 - x0) * (w - 2 * pad);
  const py = (y) => h - pad - (y - y0) / (y1 - y0) * (h - 2 * pad);

  ctx.strokeStyle = "#888";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.fillText(x0.toPrecision(3), pad, h - pad + 14);
  ctx.fillText(x1.toPrecision(3), w - pad - 20, h - pad + 14);
  ctx.fillText(y0.toPrecision(3), 2, h - pad);
  ctx.fillText(y1.toPrecision(3), 2, pad + 4);

  ctx.strokeStyle = "#bbb";
  for (const y of hlines) {
    ctx.beginPath();
    ctx.moveTo(pad, py(y));
    ctx.lineTo(w - pad, py(y));
    ctx.stroke();
  }
  series.forEach((s, k) => {
    ctx.strokeStyle = COLORS[k % COLORS.length];
    ctx.beginPath();
    s.forEach((y, i) => (i ? ctx.lineTo(px(xs[i]), py(y)) : ctx.moveTo(px(xs[i]), py(y))));
    ctx.stroke();
  });
}

function drawPotential() {
  try {
    const t = num("pot-t") * TAU;
    const [cal, w, n] = [num("pot-cale"), num("pot-w"), int("pot-n")];
    const c = potential(cal, w, t, 4, 401);
    const xs = [], vs = [];
    for (let i = 0; i < c.length; i += 2) { xs.push(c[i]); vs.push(c[i + 1]); }
    const levels = Array.from(spin_levels(n, 15, cal, w, t, 6));
    const top = Math.max(...levels) + 2;
    plotLines(document.getElementById("pot-canvas"), xs, [vs.map((v) => (v < top ? v : NaN))], levels);
    document.getElementById("pot-levels").textContent =
      `t = ${t.toFixed(1)}, lowest levels: ${levels.map((e) => e.toFixed(3)).join(", ")}`;
    report();
  } catch (e) { report(e); }
}

function spinArgs() {
  return [int("rel-n"), num("rel-gamma"), num("rel-lambda"), num("rel-beta")];
}

function drawRelaxation() {
  try {
    const rows = spin_relaxation(...spinArgs(), num("rel-t"));
    const cols = [[], [], [], [], [], []];
    rows.forEach((v, i) => cols[i % 6].push(v));
    const [t, sq, ds, pith, phith, pilc] = cols;
    plotLines(document.getElementById("rel-canvas"), t, [sq, ds, pith, phith, pilc], [0]);
    document.getElementById("rel-legend").innerHTML = ["S_Q", "dS_Q/dt", "Π_th", "Φ_th", "Π_lc"]
      .map((n, k) => `<span style="color:${COLORS[k]}">■ ${n}</span>`).join(" &nbsp; ");
    document.getElementById("hus-t").max = num("rel-t");
    drawHusimi();
    report();
  } catch (e) { report(e); }
}

function drawHusimi() {
  try {
    const g = 64;
    const t = num("hus-t");
    const q = husimi_snapshot(...spinArgs(), t, g);
    const canvas = document.getElementById("hus-canvas");
    const ctx = canvas.getContext("2d");
    const img = ctx.createImageData(g, g);
    const max = Math.max(...q);
    for (let i = 0; i < g; i++) {
      for (let l = 0; l < g; l++) {
        const v = q[i * g + l] / max;
        const p = 4 * (i * g + l);
        img.data[p] = 255 * Math.min(1, 2 * v);
        img.data[p + 1] = 255 * Math.max(0, 2 * v - 1);
        img.data[p + 2] = 255 * (1 - v) * 0.6;
        img.data[p + 3] = 255;
      }
    }
    const off = new OffscreenCanvas(g, g);
    off.getContext("2d").putImageData(img, 0, 0);
    ctx.imageSmoothingEnabled = false;
    ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
    document.getElementById("hus-label").textContent = `t = ${t.toFixed(2)}, max Q = ${max.toFixed(4)}`;
    report();
  } catch (e) { report(e); }
}

await init();
for (const id of ["pot-cale", "pot-w", "pot-t", "pot-n"]) {
  document.getElementById(id).addEventListener("input", drawPotential);
}
document.getElementById("rel-run").addEventListener("click", drawRelaxation);
document.getElementById("hus-t").addEventListener("input", drawHusimi);
drawPotential();
drawRelaxation();
