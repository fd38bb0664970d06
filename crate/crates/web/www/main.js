import init, { slitFieldMap, recoilRows, absorptionRows, thresholdKc } from "../pkg/evanescent_web.js";

const $ = (id) => document.getElementById(id);

function bind(id, draw, event = "input") {
  const input = $(id);
  const show = () => { $(id + "-v").textContent = input.value; };
  input.addEventListener("input", show);
  input.addEventListener(event, draw);
  show();
}

function heat(t) {
  // black to orange to white
  const r = Math.min(255, 510 * t);
  const g = Math.max(0, Math.min(255, 510 * t - 128));
  const b = Math.max(0, 510 * t - 255);
  return [r, g, b];
}

function drawField() {
  const canvas = $("nf");
  const ctx = canvas.getContext("2d");
  const nx = 96, nz = 64;
  const a = +$("nf-a").value, zMax = +$("nf-z").value;
  const data = slitFieldMap(a, 3 * Math.max(a, 1), zMax, nx, nz);
  const share = $("nf-share").checked;
  const values = share ? data.subarray(nx * nz) : data.subarray(0, nx * nz);
  let max = 0;
  for (const v of values) max = Math.max(max, v);
  const img = ctx.createImageData(nx, nz);
  for (let j = 0; j < nz; j++) {
    for (let i = 0; i < nx; i++) {
      const v = values[j * nx + i] / (max || 1);
      const [r, g, b] = heat(share ? v : Math.sqrt(v));
      const k = 4 * ((nz - 1 - j) * nx + i);
      img.data.set([r, g, b, 255], k);
    }
  }
  const off = new OffscreenCanvas(nx, nz);
  off.getContext("2d").putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = true;
  ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
}

function plot(canvas, series, xRange, yRange, marks = []) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const sx = (x) => 30 + (w - 40) * (x - xRange[0]) / (xRange[1] - xRange[0]);
  const sy = (y) => h - 20 - (h - 30) * (y - yRange[0]) / (yRange[1] - yRange[0]);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(30, 10); ctx.lineTo(30, h - 20); ctx.lineTo(w - 10, h - 20);
  ctx.stroke();
  ctx.fillStyle = "#666";
  ctx.fillText(xRange[0].toFixed(1), 26, h - 6);
  ctx.fillText(xRange[1].toFixed(1), w - 30, h - 6);
  ctx.fillText(yRange[1].toPrecision(2), 2, 14);
  ctx.fillText(yRange[0].toPrecision(2), 2, h - 22);
  for (const x of marks) {
    ctx.setLineDash([4, 4]);
    ctx.beginPath(); ctx.moveTo(sx(x), 10); ctx.lineTo(sx(x), h - 20); ctx.stroke();
    ctx.setLineDash([]);
  }
  for (const { xs, ys, color } of series) {
    ctx.strokeStyle = color;
    ctx.beginPath();
    xs.forEach((x, i) => (i ? ctx.lineTo(sx(x), sy(ys[i])) : ctx.moveTo(sx(x), sy(ys[i]))));
    ctx.stroke();
  }
}

function column(rows, width, c) {
  const out = [];
  for (let i = c; i < rows.length; i += width) out.push(rows[i]);
  return out;
}

function drawRecoil() {
  const kM = 10 ** +$("rc-k").value;
  const rows = recoilRows(kM, 3, 301);
  const xs = column(rows, 4, 0);
  const re = column(rows, 4, 1), im = column(rows, 4, 2), gamma = column(rows, 4, 3);
  const top = Math.max(...re, ...im, ...gamma, 1e-12);
  plot($("rc"), [
    { xs, ys: re, color: "#1f5fbf" },
    { xs, ys: im, color: "#c0392b" },
    { xs, ys: gamma, color: "#888" },
  ], [0, 3], [0, top], [thresholdKc(kM)]);
}

function drawAbsorption() {
  const rows = absorptionRows(1, +$("ab-z").value, +$("ab-w").value, 20, 200);
  const xs = column(rows, 2, 0);
  const ys = column(rows, 2, 1).map((p) => Math.log10(p));
  const finite = ys.filter(Number.isFinite);
  plot($("ab"), [{ xs, ys, color: "#1f5fbf" }], [1, 20], [Math.min(...finite), Math.max(...finite)]);
}

function guarded(draw) {
  return () => {
    try {
      draw();
      $("status").textContent = "";
    } catch (e) {
      $("status").textContent = String(e);
    }
  };
}

await init();
const field = guarded(drawField), recoil = guarded(drawRecoil), absorb = guarded(drawAbsorption);
// the field map takes a noticeable moment, redraw on release
bind("nf-a", field, "change");
bind("nf-z", field, "change");
$("nf-share").addEventListener("change", field);
bind("rc-k", recoil);
bind("ab-z", absorb);
bind("ab-w", absorb);
field();
recoil();
absorb();
