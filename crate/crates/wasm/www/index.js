import init, { Demo, gl_weights } from './pkg/pdebin_wasm.js';

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

let demo = null;

function paint(canvas, width, height, rgba) {
  canvas.width = width;
  canvas.height = height;
  canvas.style.width = `${width * 2}px`;
  canvas.getContext('2d').putImageData(new ImageData(new Uint8ClampedArray(rgba), width, height), 0, 0);
}

function plotWeights() {
  const w = gl_weights(num('alpha'), 16);
  const c = $('weights');
  const g = c.getContext('2d');
  g.clearRect(0, 0, c.width, c.height);
  const mid = c.height / 2;
  const bar = c.width / w.length;
  g.strokeStyle = '#999';
  g.beginPath();
  g.moveTo(0, mid);
  g.lineTo(c.width, mid);
  g.stroke();
  w.forEach((v, k) => {
    g.fillStyle = v >= 0 ? '#2a6' : '#c43';
    const h = v * (mid - 8);
    g.fillRect(k * bar + 2, mid - Math.max(h, 0), bar - 4, Math.abs(h));
  });
}

function runBinarize() {
  const started = performance.now();
  try {
    const out = demo.binarize(num('cs'), num('ce'), num('cd'), num('alpha'), $('nonlinear').checked, num('iters'));
    paint($('binary'), demo.width(), demo.height(), out);
    const ms = (performance.now() - started).toFixed(0);
    let text = `${demo.last_iterations()} iterations, converged ${demo.last_converged()}, ${ms} ms`;
    if (demo.has_truth()) {
      text += ` | FM ${demo.last_fm().toFixed(2)}  DRD ${demo.last_drd().toFixed(3)}`;
    }
    $('stats').textContent = text;
  } catch (err) {
    $('stats').textContent = String(err);
  }
}

function runEdges() {
  try {
    paint($('edges'), demo.width(), demo.height(), demo.edge_map(num('mix'), num('radius'), $('nonlinear').checked));
  } catch (err) {
    $('stats').textContent = String(err);
  }
}

function loadPage() {
  if (demo) demo.free();
  demo = new Demo(256, 192, num('seed'), num('stain'), num('noise'));
  refresh();
}

function refresh() {
  paint($('input'), demo.width(), demo.height(), demo.input_rgba());
  runBinarize();
  runEdges();
  plotWeights();
}

function loadFile(file) {
  const img = new Image();
  img.onload = () => {
    const scale = Math.min(1, 512 / Math.max(img.width, img.height));
    const w = Math.max(1, Math.round(img.width * scale));
    const h = Math.max(1, Math.round(img.height * scale));
    const c = document.createElement('canvas');
    c.width = w;
    c.height = h;
    const g = c.getContext('2d');
    g.drawImage(img, 0, 0, w, h);
    if (demo) demo.free();
    demo = Demo.from_rgba(w, h, g.getImageData(0, 0, w, h).data);
    refresh();
  };
  img.src = URL.createObjectURL(file);
}

function bindOutputs() {
  for (const input of document.querySelectorAll('input[type=range]')) {
    const out = input.nextElementSibling;
    const show = () => { out.value = input.value; };
    show();
    input.addEventListener('input', show);
  }
}

await init();
bindOutputs();
for (const id of ['seed', 'stain', 'noise']) $(id).addEventListener('change', loadPage);
for (const id of ['cs', 'ce', 'cd', 'iters']) $(id).addEventListener('change', runBinarize);
$('alpha').addEventListener('input', plotWeights);
$('alpha').addEventListener('change', runBinarize);
$('nonlinear').addEventListener('change', () => { runBinarize(); runEdges(); });
for (const id of ['mix', 'radius']) $(id).addEventListener('change', runEdges);
$('file').addEventListener('change', (e) => { if (e.target.files[0]) loadFile(e.target.files[0]); });
loadPage();
