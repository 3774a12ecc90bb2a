import init, { cluster, compare_variants, random_points } from "./pkg/wardhc_wasm.js";

const canvas = document.getElementById("plane");
const ctx = canvas.getContext("2d");
const $ = (id) => document.getElementById(id);
let coords = [];
let seed = 1;

function draw() {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.font = "11px sans-serif";
  for (let i = 0; i < coords.length; i += 2) {
    const x = coords[i] * canvas.width;
    const y = (1 - coords[i + 1]) * canvas.height;
    ctx.fillStyle = "steelblue";
    ctx.beginPath();
    ctx.arc(x, y, 4, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillStyle = "#333";
    ctx.fillText(String(i / 2), x + 6, y - 6);
  }
}

function recluster() {
  $("status").textContent = "";
  $("comparison").innerHTML = "";
  if (coords.length < 4) {
    $("dendrogram").innerHTML = "";
    $("metadata").textContent = "";
    return;
  }
  try {
    const out = JSON.parse(cluster(new Float64Array(coords), $("method").value, $("square").checked, $("force").checked));
    $("dendrogram").innerHTML = out.svg;
    $("metadata").textContent = JSON.stringify(out.metadata, null, 2) + "\n\n" + out.merge_table;
  } catch (err) {
    $("dendrogram").innerHTML = "";
    $("metadata").textContent = "";
    $("status").textContent = String(err);
  }
}

function showComparison() {
  if (coords.length < 4) {
    $("status").textContent = "place at least two points";
    return;
  }
  const out = JSON.parse(compare_variants(new Float64Array(coords)));
  const rows = out.ward_d2.map((h, i) =>
    `<tr><td>${i + 1}</td><td>${h.toFixed(6)}</td><td>${Math.sqrt(out.ward_d_squared[i]).toFixed(6)}</td><td>${out.ward_d_plain[i].toFixed(6)}</td></tr>`);
  const dev = out.max_relative_deviation_after_sqrt;
  $("comparison").innerHTML =
    `<p>ward.D on squared distances vs ward.D2: same tree: ${out.topology_equal}` +
    (dev === null ? "" : `, max relative height gap after sqrt ${dev.toExponential(2)}`) +
    `. ward.D forced onto plain distances gives the same tree: ${out.forced_topology_equal}.</p>` +
    `<table><tr><th>rank</th><th>ward.D2</th><th>sqrt ward.D(D²)</th><th>ward.D(D) forced</th></tr>${rows.join("")}</table>`;
}

canvas.addEventListener("click", (e) => {
  const r = canvas.getBoundingClientRect();
  coords.push((e.clientX - r.left) / r.width, 1 - (e.clientY - r.top) / r.height);
  draw();
  recluster();
});

await init();
$("method").addEventListener("change", recluster);
$("square").addEventListener("change", recluster);
$("force").addEventListener("change", recluster);
$("clear").addEventListener("click", () => { coords = []; draw(); recluster(); });
$("random").addEventListener("click", () => {
  coords = Array.from(random_points(20, seed++));
  draw();
  recluster();
});
$("compare").addEventListener("click", showComparison);
draw();
