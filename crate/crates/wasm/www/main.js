import init, { landscape, Demo, campaign } from "./pkg/bondscape_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

// cells: interleaved [bonds, cash]; colour by the larger share of each
function paintCells(ctx, cells, w, h, peak) {
  const img = ctx.createImageData(w, h);
  const scale = peak > 0 ? 255 / peak : 0;
  for (let i = 0; i < w * h; i++) {
    const b = Math.min(255, cells[2 * i] * scale);
    const c = Math.min(255, cells[2 * i + 1] * scale);
    img.data.set([255 - b * 0.8, 255 - (b + c) * 0.4, 255 - c * 0.9, 255], 4 * i);
  }
  const tmp = new OffscreenCanvas(w, h);
  tmp.getContext("2d").putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(tmp, 0, 0, ctx.canvas.width, ctx.canvas.height);
}

function drawGrid() {
  const ctx = $("grid").getContext("2d");
  paintCells(ctx, landscape(num("peak"), num("radius")), 50, 50, num("peak"));
}

let demo = null;
let timer = null;

function resetDemo() {
  stop();
  demo?.free();
  demo = new Demo($("preset").value, BigInt(num("seed")), BigInt(num("epoch")), num("peak"), num("radius"));
  drawDemo();
}

function drawDemo() {
  const canvas = $("sim");
  const ctx = canvas.getContext("2d");
  const w = demo.width(), h = demo.height();
  paintCells(ctx, demo.cells(), w, h, num("peak"));
  const a = demo.agents();
  const sx = canvas.width / w, sy = canvas.height / h;
  for (let i = 0; i < a.length; i += 5) {
    ctx.fillStyle = a[i + 4] ? "#000" : "#bbb";
    ctx.beginPath();
    ctx.arc((a[i] + 0.5) * sx, (a[i + 1] + 0.5) * sy, sx * 0.45, 0, 2 * Math.PI);
    ctx.fill();
  }
  const s = JSON.parse(demo.status());
  const pct = s.trades + s.services ? (100 * s.trades / (s.trades + s.services)).toFixed(2) : "0.00";
  $("status").textContent =
    `step ${s.step}  alive ${s.alive}  trades ${s.trades}  services ${s.services}  trade % ${pct}` +
    (demo.finished() ? "  (finished)" : "");
}

function stop() {
  clearInterval(timer);
  timer = null;
  $("play").textContent = "play";
}

function togglePlay() {
  if (timer) return stop();
  $("play").textContent = "pause";
  timer = setInterval(() => {
    demo.advance(5);
    drawDemo();
    if (demo.finished()) stop();
  }, 40);
}

function runCampaign() {
  const out = JSON.parse(campaign($("preset").value, num("epochs"), BigInt(num("seed")), 10));
  const t = out.stats.trade_pct;
  $("summary").textContent =
    `trade %  median ${t.median.toFixed(2)}  mean ${t.mean.toFixed(2)}  min ${t.min.toFixed(2)}  max ${t.max.toFixed(2)}\n` +
    `zero-trade epochs ${out.stats.zero_trade_share.toFixed(1)}%  survivors at horizon ${out.stats.survivor_share_at_horizon.toFixed(1)}%`;
  const canvas = $("hist");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const bins = out.histogram;
  const top = Math.max(...bins.map((b) => b.count), 1);
  const bw = canvas.width / bins.length;
  ctx.font = "10px sans-serif";
  bins.forEach((b, i) => {
    const bh = (canvas.height - 20) * b.count / top;
    ctx.fillStyle = "#4a7bd0";
    ctx.fillRect(i * bw + 1, canvas.height - 14 - bh, bw - 2, bh);
    ctx.fillStyle = "#222";
    ctx.fillText(b.lower.toFixed(0), i * bw + 2, canvas.height - 2);
  });
}

await init();
$("draw").onclick = drawGrid;
$("reset").onclick = resetDemo;
$("step").onclick = () => { demo.advance(1); drawDemo(); };
$("play").onclick = togglePlay;
$("campaign").onclick = runCampaign;
drawGrid();
resetDemo();
