import init, { Demo } from "./pkg/pushrank_web.js";

const $ = (id) => document.getElementById(id);
let demo = null;
let graph = null;
let positions = [];
let scores = new Map();

function num(id) {
  return Number($(id).value);
}

function graphParams() {
  return JSON.stringify({
    nodes: num("nodes"),
    degree: num("degree"),
    dangling: num("dangling"),
    window: num("window"),
    seed: num("seed"),
    weighted: $("weighted").checked,
  });
}

function rankParams() {
  return JSON.stringify({
    source: num("source"),
    alpha: num("alpha"),
    eps: Number($("eps").value),
    fifo: $("fifo").checked,
    absolute: $("absolute").checked,
  });
}

function layout(n, w, h) {
  const r = Math.min(w, h) / 2 - 20;
  return Array.from({ length: n }, (_, i) => {
    const a = (2 * Math.PI * i) / n - Math.PI / 2;
    return [w / 2 + r * Math.cos(a), h / 2 + r * Math.sin(a)];
  });
}

function drawGraph() {
  const c = $("graph");
  const ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  if (!graph) return;
  positions = layout(graph.nodes, c.width, c.height);
  ctx.strokeStyle = "rgba(0, 0, 0, 0.08)";
  ctx.beginPath();
  for (const [x, y] of graph.arcs) {
    ctx.moveTo(...positions[x]);
    ctx.lineTo(...positions[y]);
  }
  ctx.stroke();
  const max = Math.max(1e-300, ...scores.values());
  const dangling = new Set(graph.dangling);
  const radius = graph.nodes > 400 ? 2 : 4;
  positions.forEach(([px, py], i) => {
    const s = scores.get(i) ?? 0;
    // log scale over six decades
    const t = s > 0 ? Math.max(0, 1 + Math.log10(s / max) / 6) : 0;
    ctx.fillStyle = s > 0 ? `hsl(${220 - 220 * t}, 80%, ${70 - 25 * t}%)` : "#ddd";
    ctx.beginPath();
    ctx.arc(px, py, i === num("source") ? radius + 3 : radius, 0, 2 * Math.PI);
    ctx.fill();
    if (dangling.has(i)) {
      ctx.strokeStyle = "#000";
      ctx.stroke();
    }
  });
}

function drawTrace(trace) {
  const c = $("trace");
  const ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  const len = Math.max(trace.priority.length, trace.fifo.length);
  const floor = -16;
  const x = (i) => 40 + ((c.width - 50) * i) / Math.max(1, len - 1);
  const y = (r) => 10 + ((c.height - 30) * Math.log10(Math.max(r, 1e-16))) / floor;
  ctx.fillStyle = "#666";
  ctx.font = "11px sans-serif";
  for (let e = 0; e >= floor; e -= 4) {
    ctx.fillText(`1e${e}`, 2, y(10 ** e) + 4);
  }
  ctx.fillText("pushes", c.width - 50, c.height - 4);
  const line = (values, color) => {
    ctx.strokeStyle = color;
    ctx.beginPath();
    values.forEach((r, i) => (i ? ctx.lineTo(x(i), y(r)) : ctx.moveTo(x(i), y(r))));
    ctx.stroke();
  };
  line(trace.priority, "#c33");
  line(trace.fifo, "#36c");
  ctx.fillStyle = "#000";
  for (const [pushes, bound] of trace.bound) {
    ctx.fillRect(x(pushes) - 2, y(bound) - 2, 4, 4);
  }
  ctx.fillStyle = "#c33";
  ctx.fillText("priority", 50, c.height - 4);
  ctx.fillStyle = "#36c";
  ctx.fillText("fifo", 110, c.height - 4);
  ctx.fillStyle = "#000";
  ctx.fillText("■ α^(t+1) at P(t)", 150, c.height - 4);
}

function showRank(view) {
  scores = new Map(view.scores);
  const d = view.oracle_distance;
  $("stats").textContent = [
    `pushes ${view.pushes}, arcs ${view.arcs_traversed}, visited ${view.visited}`,
    `‖p‖ ${view.p_norm}, ‖r‖ ${view.r_norm}, ‖r‖/‖p‖ ${view.relative_bound}`,
    d === null ? "graph too large for the exact check" : `exact ℓ₁ error ${d}`,
  ].join("\n");
  const rows = view.scores.slice(0, 15).map(([n, s]) => `<tr><td>${n}</td><td>${s.toExponential(6)}</td></tr>`);
  $("top").innerHTML = `<tr><th>node</th><th>score</th></tr>${rows.join("")}`;
}

function guarded(f) {
  return () => {
    $("error").textContent = "";
    try {
      f();
    } catch (e) {
      $("error").textContent = String(e.message ?? e);
    }
  };
}

const generate = guarded(() => {
  demo?.free();
  demo = new Demo(graphParams());
  graph = JSON.parse(demo.graph());
  scores = new Map();
  $("source").max = graph.nodes - 1;
  rank();
});

const rank = guarded(() => {
  if (!demo) return;
  showRank(JSON.parse(demo.rank(rankParams())));
  drawTrace(JSON.parse(demo.trace(rankParams(), 2000)));
  drawGraph();
});

$("graph").addEventListener("click", (ev) => {
  const rect = ev.target.getBoundingClientRect();
  const [mx, my] = [ev.clientX - rect.left, ev.clientY - rect.top];
  let best = -1;
  let bestDist = 100;
  positions.forEach(([px, py], i) => {
    const d = (px - mx) ** 2 + (py - my) ** 2;
    if (d < bestDist) [best, bestDist] = [i, d];
  });
  if (best >= 0) {
    $("source").value = best;
    rank();
  }
});

await init();
$("generate").addEventListener("click", generate);
$("rank").addEventListener("click", rank);
generate();
