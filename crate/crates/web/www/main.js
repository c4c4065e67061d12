import init, { compareSignals, dtwTrellis, syntheticAlignment } from "./pkg/dkvec_web.js";

const $ = (id) => document.getElementById(id);

function report(el, fn) {
  try {
    el.classList.remove("err");
    fn();
  } catch (e) {
    el.textContent = String(e);
    el.classList.add("err");
  }
}

function axes(ctx, w, h) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(0.5, 0.5, w - 1, h - 1);
}

function drawSignals() {
  report($("signals-out"), () => {
    const r = JSON.parse(compareSignals(
      $("text-a").value, $("text-b").value,
      $("word-a").value, $("word-b").value,
      $("mode-a").value, $("mode-b").value));
    const c = $("signals-canvas"), ctx = c.getContext("2d");
    axes(ctx, c.width, c.height);
    const maxY = Math.max(1, ...r.a.points.map(p => p[1]), ...r.b.points.map(p => p[1]));
    for (const [curve, color] of [[r.a, "#1f5fbf"], [r.b, "#c0392b"]]) {
      ctx.strokeStyle = color;
      ctx.beginPath();
      curve.points.forEach(([x, y], k) => {
        const px = x / curve.text_length * (c.width - 20) + 10;
        const py = c.height - 10 - y / maxY * (c.height - 20);
        k === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
      });
      ctx.stroke();
    }
    $("signals-out").textContent =
      `freq ${r.a.frequency} / ${r.b.frequency}, filter: ${r.filter}, DTW score ${r.score} (per step ${r.normalized_score.toFixed(1)})`;
  });
}

function drawTrellis() {
  report($("dtw-out"), () => {
    const r = JSON.parse(dtwTrellis($("dtw-x").value, $("dtw-y").value));
    const c = $("dtw-canvas"), ctx = c.getContext("2d");
    axes(ctx, c.width, c.height);
    const n = r.x.length, m = r.y.length;
    const cw = c.width / n, ch = c.height / m;
    const maxC = Math.max(1, ...r.cost.flat());
    for (let i = 0; i < n; i++) {
      for (let j = 0; j < m; j++) {
        const v = Math.round(255 - 200 * r.cost[i][j] / maxC);
        ctx.fillStyle = `rgb(${v},${v},255)`;
        ctx.fillRect(i * cw, c.height - (j + 1) * ch, cw, ch);
      }
    }
    ctx.strokeStyle = "#c0392b";
    ctx.lineWidth = 3;
    ctx.beginPath();
    r.path.forEach(([i, j], k) => {
      const px = (i + 0.5) * cw, py = c.height - (j + 0.5) * ch;
      k === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
    });
    ctx.stroke();
    ctx.lineWidth = 1;
    $("dtw-out").textContent = `score ${r.score}, path length ${r.path.length}`;
  });
}

function plotPoints(canvas, la, lb, points, style) {
  const ctx = canvas.getContext("2d");
  const sx = (a) => a / la * canvas.width, sy = (b) => canvas.height - b / lb * canvas.height;
  if (style === "dots") {
    ctx.fillStyle = "#1f5fbf";
    for (const [a, b] of points) ctx.fillRect(sx(a) - 1, sy(b) - 1, 2, 2);
  } else {
    ctx.strokeStyle = style;
    ctx.beginPath();
    ctx.moveTo(sx(0), sy(0));
    for (const [a, b] of points) ctx.lineTo(sx(a), sy(b));
    ctx.lineTo(sx(la), sy(lb));
    ctx.stroke();
  }
}

function drawSynthetic() {
  report($("syn-out"), () => {
    const r = JSON.parse(syntheticAlignment(
      +$("syn-seed").value, +$("syn-len").value, +$("syn-rate").value,
      +$("syn-block").value, +$("syn-jitter").value, +$("syn-topk").value));
    for (const id of ["syn-dots", "syn-path"]) {
      const c = $(id);
      axes(c.getContext("2d"), c.width, c.height);
    }
    plotPoints($("syn-dots"), r.length_a, r.length_b, r.dots, "dots");
    plotPoints($("syn-path"), r.length_a, r.length_b, r.truth, "#bbb");
    plotPoints($("syn-path"), r.length_a, r.length_b, r.path, "#c0392b");
    $("syn-out").textContent =
      `A ${r.length_a} / B ${r.length_b} tokens, ${r.dots.length} dots, ` +
      `precision@40 ${r.precision_at_40.toFixed(3)}, mean offset error ${r.mean_abs_error.toFixed(1)} tokens`;
    const rows = r.lexicon.slice(0, 40).map(e =>
      `<tr class="${e.correct ? "" : "bad"}"><td>${e.score}</td><td>${e.source}</td><td>${e.target}</td></tr>`);
    $("syn-lex").innerHTML = "<tr><th>score</th><th>A word</th><th>B word</th></tr>" + rows.join("");
  });
}

await init();
$("run-signals").onclick = drawSignals;
$("run-dtw").onclick = drawTrellis;
$("run-syn").onclick = drawSynthetic;
drawSignals();
drawTrellis();
