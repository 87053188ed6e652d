// Expects the wasm-bindgen output (--target web) in ./pkg.
import init, { thresholds, concavityCurve, wulffSection } from "./pkg/lpbm_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function guard(fn) {
  return () => {
    $("error").textContent = "";
    try { fn(); } catch (e) { $("error").textContent = String(e.message ?? e); }
  };
}

function renderThresholds() {
  const rows = JSON.parse(thresholds(num("t-min"), num("t-max")));
  const head = "<tr><th>n</th><th>k</th><th>p̄</th><th>case</th></tr>";
  $("t-table").innerHTML = head + rows
    .map((r) => `<tr><td>${r.n}</td><td>${r.k}</td><td>${r.pbar.toFixed(6)}</td><td>${r.branch}</td></tr>`)
    .join("");
}

// Polyline of (xs, ys) inside the pixel rectangle r, data window [x0, x1] × [y0, y1].
function plot(ctx, r, xs, ys, [x0, x1, y0, y1], color) {
  const px = (x) => r.x + ((x - x0) / (x1 - x0)) * r.w;
  const py = (y) => r.y + r.h - ((y - y0) / (y1 - y0)) * r.h;
  ctx.strokeStyle = "#aaa";
  ctx.strokeRect(r.x, r.y, r.w, r.h);
  if (y0 < 0 && y1 > 0) {
    ctx.beginPath(); ctx.moveTo(r.x, py(0)); ctx.lineTo(r.x + r.w, py(0)); ctx.stroke();
  }
  ctx.strokeStyle = color;
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(px(x), py(ys[i])) : ctx.moveTo(px(x), py(ys[i]))));
  ctx.stroke();
}

function span(v) {
  const lo = Math.min(...v), hi = Math.max(...v);
  const pad = (hi - lo) * 0.05 || Math.abs(hi) * 1e-3 || 1e-12;
  return [lo - pad, hi + pad];
}

function renderConcavity() {
  const c = JSON.parse(concavityCurve(num("c-n"), num("c-k"), num("c-eps"), 41));
  const ctx = $("c-canvas").getContext("2d");
  const { width: w, height: h } = ctx.canvas;
  ctx.clearRect(0, 0, w, h);
  const left = { x: 10, y: 24, w: w / 2 - 20, h: h - 34 };
  const right = { x: w / 2 + 10, y: 24, w: w / 2 - 20, h: h - 34 };
  plot(ctx, left, c.s, c.log_f, [-2, 2, ...span(c.log_f)], "#1565c0");
  plot(ctx, right, c.s, c.h, [-2, 2, ...span(c.h.concat([0]))], "#c62828");
  ctx.fillStyle = "#222";
  ctx.fillText("log f_k(s), s in [-2, 2]", left.x, 16);
  ctx.fillText("H(s) = f f'' - f'^2", right.x, 16);
  $("c-verdict").textContent = `verdict: ${c.verdict}`;
}

function renderWulff() {
  const p = num("w-p");
  $("w-p-val").textContent = p.toFixed(2);
  const s = JSON.parse(wulffSection([0, 1, 1], [1, 1, 0], p, 0.5, 2, 0, 2, 96));
  const ctx = $("w-canvas").getContext("2d");
  const { width: w, height: h } = ctx.canvas;
  const scale = w / 2.4;
  const X = (x) => w / 2 + x * scale;
  const Y = (y) => h / 2 - y * scale;
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#ddd";
  ctx.strokeRect(X(-1), Y(1), 2 * scale, 2 * scale);
  ctx.setLineDash([5, 4]);
  ctx.strokeStyle = "#888";
  const [bx, by] = s.box_half;
  ctx.strokeRect(X(-bx), Y(by), 2 * bx * scale, 2 * by * scale);
  ctx.setLineDash([]);
  ctx.fillStyle = "rgba(21, 101, 192, 0.25)";
  ctx.strokeStyle = "#1565c0";
  ctx.beginPath();
  s.outline.forEach(([x, y], i) => (i ? ctx.lineTo(X(x), Y(y)) : ctx.moveTo(X(x), Y(y))));
  ctx.closePath();
  ctx.fill();
  ctx.stroke();
  const fails = s.vk_box < s.vk_mean;
  $("w-status").innerHTML = `V₂(K_p) ≤ ${s.vk_box.toFixed(4)} vs ${s.vk_mean.toFixed(4)}` +
    (fails ? ' <span class="fails">inequality fails</span>' : " (no certificate)");
}

await init();
$("t-run").onclick = guard(renderThresholds);
$("c-run").onclick = guard(renderConcavity);
$("w-p").oninput = guard(renderWulff);
guard(renderThresholds)();
guard(renderConcavity)();
guard(renderWulff)();
