import init, { classify, torusDistance, torusBoundary } from "./pkg/teich_web.js";

const num = (box, name) => Number(box.querySelector(`[name=${name}]`).value);

function fail(el, err) {
  el.innerHTML = "";
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = String(err.message ?? err);
  el.append(p);
}

function setupClassify() {
  const box = document.getElementById("classify");
  const out = box.querySelector(".out");
  box.querySelector("button").onclick = () => {
    try {
      const r = JSON.parse(classify(num(box, "a"), num(box, "b"), num(box, "c"), num(box, "d")));
      out.textContent = JSON.stringify(r, null, 2);
      out.classList.remove("error");
    } catch (e) {
      out.textContent = String(e.message ?? e);
      out.classList.add("error");
    }
  };
}

// Plot area with a margin, mapping data ranges onto the canvas.
function frame(canvas, xr, yr) {
  const ctx = canvas.getContext("2d");
  const m = 40, w = canvas.width - 2 * m, h = canvas.height - 2 * m;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(m, m, w, h);
  const px = (x) => m + ((x - xr[0]) / (xr[1] - xr[0])) * w;
  const py = (y) => m + h - ((y - yr[0]) / (yr[1] - yr[0])) * h;
  return { ctx, px, py, m, w, h };
}

function plotTraces(canvas, series) {
  const values = series.flatMap((s) => s.points.map((p) => p.value));
  const cutoffs = series.flatMap((s) => s.points.map((p) => p.cutoff));
  const lo = Math.min(...values), hi = Math.max(...values);
  const pad = (hi - lo) * 0.1 || 0.05;
  const { ctx, px, py, m, h } = frame(canvas, [1, Math.max(...cutoffs)], [lo - pad, hi + pad]);
  ctx.font = "12px system-ui";
  ctx.fillStyle = "#444";
  ctx.fillText("cutoff", px(Math.max(...cutoffs)) - 30, m + h + 28);
  ctx.fillText(`${(hi + pad).toFixed(4)}`, 2, m + 4);
  ctx.fillText(`${(lo - pad).toFixed(4)}`, 2, m + h);
  series.forEach((s, i) => {
    ctx.strokeStyle = s.color;
    ctx.beginPath();
    s.points.forEach((p, j) => (j ? ctx.lineTo : ctx.moveTo).call(ctx, px(p.cutoff), py(p.value)));
    ctx.stroke();
    ctx.fillStyle = s.color;
    ctx.fillText(s.label, m + 8, m + 16 + 16 * i);
  });
}

function showDistance(box, r) {
  const out = box.querySelector(".out");
  const rows = [
    ["forward d_L", r.d_L_forward],
    ["backward d_L", r.d_L_backward],
    ["d_ls", r.d_ls],
    ["|log δ − log ρ| forward", r.gap],
  ];
  out.innerHTML = "<table>" + rows.map(([k, v]) => `<tr><th>${k}</th><td>${v.toFixed(10)}</td></tr>`).join("") + "</table>";
  plotTraces(box.querySelector("canvas"), [
    { label: "δ forward", color: "#1f5fbf", points: r.forward.delta.trace },
    { label: "ρ forward", color: "#7fa7e6", points: r.forward.rho.trace },
    { label: "δ backward", color: "#bf3f1f", points: r.backward.delta.trace },
    { label: "ρ backward", color: "#e69a7f", points: r.backward.rho.trace },
  ]);
}

function showBoundary(box, r) {
  const out = box.querySelector(".out");
  const fits = r.fits.map((f) => `${f.anchor_word.join(" ")}: 1/α ≈ ${f.inv_alpha_est.toFixed(4)}`).join("; ");
  out.innerHTML = `<p>${r.points.length} points, orientation ${r.orientation_preserving ? "preserved" : "reversed"}. Worst anchors: ${fits || "none"}.</p>`;
  const { ctx, px, py, m, w, h } = frame(box.querySelector("canvas"), [-1, 1], [-1, 1]);
  ctx.strokeStyle = "#ddd";
  ctx.beginPath();
  ctx.moveTo(px(-1), py(-1));
  ctx.lineTo(px(1), py(1));
  ctx.stroke();
  ctx.fillStyle = "#1f5fbf";
  for (const p of r.points) ctx.fillRect(px(p.u) - 1, py(p.v) - 1, 2, 2);
  ctx.fillStyle = "#444";
  ctx.font = "12px system-ui";
  ctx.fillText("source boundary, 2 atan(x)/π", m + w / 2 - 70, m + h + 28);
  ctx.fillText("target", 2, m + h / 2);
}

function setupPair() {
  const box = document.getElementById("pair");
  const out = box.querySelector(".out");
  for (const button of box.querySelectorAll("button")) {
    button.onclick = () => {
      const args = ["x1", "y1", "x2", "y2", "len"].map((n) => num(box, n));
      try {
        if (button.dataset.op === "distance") showDistance(box, JSON.parse(torusDistance(...args)));
        else showBoundary(box, JSON.parse(torusBoundary(...args)));
      } catch (e) {
        fail(out, e);
      }
    };
  }
}

await init();
setupClassify();
setupPair();
