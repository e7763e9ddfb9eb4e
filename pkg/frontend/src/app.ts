// Tracer application: canvas rendering plus event wiring. Every displayed
// number is fetched from the service; overlays are vector redraws per frame.

import { ApiClient, ApiError } from './api.js';
import { formatReadout, formatResidual, formatRms } from './format.js';
import { MutationQueue } from './queue.js';
import type {
  ControlPointPayload,
  DisplayUnit,
  FitPayload,
  SessionDoc,
} from './types.js';
import {
  ViewState,
  imageToScreen,
  initialView,
  overlaySampleCount,
  panBy,
  screenToImage,
  zoomAt,
} from './view.js';

interface Elements {
  canvas: HTMLCanvasElement;
  status: HTMLElement;
  readout: HTMLElement;
  residual: HTMLElement;
  fitPanel: HTMLElement;
  featureSelect: HTMLSelectElement;
  unitSelect: HTMLSelectElement;
  harmonics: HTMLInputElement;
  calibrateButton: HTMLButtonElement;
  controlPointMode: HTMLInputElement;
}

export class TracerApp {
  view: ViewState = initialView();
  session: SessionDoc | null = null;
  private image: HTMLImageElement | null = null;
  private queue = new MutationQueue();
  private pendingPairs: ControlPointPayload[] = [];
  private lastFit: FitPayload | null = null;

  constructor(
    private api: ApiClient,
    private sessionId: string,
    private el: Elements,
  ) {}

  async start(): Promise<void> {
    this.session = await this.api.getSession(this.sessionId);
    this.view.displayUnit = this.session.display_unit;
    this.el.unitSelect.value = this.view.displayUnit;
    this.populateFeatures();
    await this.loadImage(this.session.image.path);
    this.bindEvents();
    this.render();
    this.setStatus(this.session.calibration ? 'calibrated' : 'place control points to calibrate');
    if (this.session.calibration) {
      this.showResidual(this.session.calibration.rms_residual);
    }
  }

  private loadImage(path: string): Promise<void> {
    return new Promise((resolve) => {
      const img = new Image();
      img.onload = () => {
        this.image = img;
        resolve();
      };
      img.onerror = () => resolve(); // missing raster: grid-only workspace
      img.src = path;
    });
  }

  private populateFeatures(): void {
    const select = this.el.featureSelect;
    select.innerHTML = '';
    for (const f of this.session?.features ?? []) {
      const option = document.createElement('option');
      option.value = f.id;
      option.textContent = `${f.name} (${f.kind})`;
      select.appendChild(option);
    }
    this.view.activeFeature = this.session?.features[0]?.id ?? null;
    if (this.view.activeFeature) select.value = this.view.activeFeature;
  }

  private bindEvents(): void {
    const canvas = this.el.canvas;
    canvas.addEventListener('click', (ev) => {
      const rect = canvas.getBoundingClientRect();
      void this.handleClick(ev.clientX - rect.left, ev.clientY - rect.top);
    });
    canvas.addEventListener('wheel', (ev) => {
      ev.preventDefault();
      const rect = canvas.getBoundingClientRect();
      const factor = ev.deltaY < 0 ? 1.25 : 0.8;
      this.view = zoomAt(this.view, ev.clientX - rect.left, ev.clientY - rect.top, factor);
      void this.refreshOverlay();
      this.render();
    });
    let dragging: [number, number] | null = null;
    canvas.addEventListener('pointerdown', (ev) => {
      if (ev.shiftKey) dragging = [ev.clientX, ev.clientY];
    });
    canvas.addEventListener('pointermove', (ev) => {
      if (dragging) {
        this.view = panBy(this.view, ev.clientX - dragging[0], ev.clientY - dragging[1]);
        dragging = [ev.clientX, ev.clientY];
        this.render();
      }
    });
    canvas.addEventListener('pointerup', () => (dragging = null));

    this.el.featureSelect.addEventListener('change', () => {
      this.view.activeFeature = this.el.featureSelect.value;
      this.lastFit = null;
      void this.refreshReadout();
      this.render();
    });
    this.el.unitSelect.addEventListener('change', () => {
      this.view.displayUnit = this.el.unitSelect.value as DisplayUnit;
      void this.refreshReadout();
    });
    this.el.harmonics.addEventListener('input', () => void this.refreshFit());
    this.el.calibrateButton.addEventListener('click', () => void this.calibrate());
  }

  private async handleClick(sx: number, sy: number): Promise<void> {
    const [u, v] = screenToImage(this.view, sx, sy);
    if (this.el.controlPointMode.checked) {
      const world = window.prompt('world coordinates x,y (or lat,lon) for this point:');
      if (!world) return;
      const parts = world.split(',').map(Number);
      if (parts.length !== 2 || parts.some(Number.isNaN)) {
        this.setStatus('bad coordinates; expected x,y');
        return;
      }
      const pair: ControlPointPayload =
        this.session?.projection === 'web_mercator'
          ? { pixel: [u, v], geo: [parts[0], parts[1]] }
          : { pixel: [u, v], world: [parts[0], parts[1]] };
      this.pendingPairs.push(pair);
      this.el.calibrateButton.disabled = this.pendingPairs.length < 2;
      this.setStatus(`${this.pendingPairs.length} control point(s) staged`);
      this.render();
      return;
    }
    const featureId = this.view.activeFeature;
    if (!featureId || !this.session?.calibration) {
      this.setStatus('calibrate and select a feature before tracing');
      return;
    }
    try {
      await this.queue.enqueue(() => this.api.addPoint(this.sessionId, featureId, u, v));
      this.session = await this.api.getSession(this.sessionId);
      await this.refreshReadout();
      this.render();
    } catch (err) {
      this.surfaceError(err);
    }
  }

  private async calibrate(): Promise<void> {
    try {
      const result = await this.queue.enqueue(() =>
        this.api.calibrate(this.sessionId, this.pendingPairs),
      );
      this.session = await this.api.getSession(this.sessionId);
      this.pendingPairs = [];
      this.showResidual(result.rms_residual);
      this.setStatus('calibrated');
      this.render();
    } catch (err) {
      this.surfaceError(err);
    }
  }

  private async refreshReadout(): Promise<void> {
    const featureId = this.view.activeFeature;
    if (!featureId || !this.session?.calibration) return;
    try {
      const m = await this.api.measure(this.sessionId, featureId, this.view.displayUnit);
      this.el.readout.textContent = formatReadout(m.display, m.unit, m.kind);
    } catch (err) {
      if (err instanceof ApiError && err.code === 'incomplete-feature') {
        this.el.readout.textContent = '—';
      } else {
        this.surfaceError(err);
      }
    }
  }

  private async refreshFit(): Promise<void> {
    const featureId = this.view.activeFeature;
    const feature = this.session?.features.find((f) => f.id === featureId);
    if (!featureId || feature?.kind !== 'region') return;
    const n = Number(this.el.harmonics.value);
    try {
      this.lastFit = await this.api.fit(this.sessionId, featureId, n);
      this.el.fitPanel.textContent =
        `n=${this.lastFit.n}  rms ${formatRms(this.lastFit.rms)}  area ${this.lastFit.area.toFixed(4)} km²`;
      this.render();
    } catch (err) {
      if (err instanceof ApiError && err.code === 'insufficient-data') {
        this.el.harmonics.title = 'not enough vertices for this harmonic count';
      } else {
        this.surfaceError(err);
      }
    }
  }

  private async refreshOverlay(): Promise<void> {
    // re-fit sampling density to the new zoom; the curve is vector-drawn
    if (this.lastFit && this.view.activeFeature) {
      const n = this.lastFit.n;
      try {
        this.lastFit = await this.api.fit(this.sessionId, this.view.activeFeature, n);
      } catch {
        /* keep previous overlay on transient errors */
      }
    }
  }

  private showResidual(value: number): void {
    this.el.residual.textContent = formatResidual(value, 'km');
  }

  private setStatus(text: string): void {
    this.el.status.textContent = text;
  }

  private surfaceError(err: unknown): void {
    if (err instanceof ApiError) {
      this.setStatus(`${err.code}: ${err.message}`);
    } else {
      this.setStatus(String(err));
    }
  }

  render(): void {
    const ctx = this.el.canvas.getContext('2d');
    if (!ctx) return;
    const { width, height } = this.el.canvas;
    ctx.setTransform(1, 0, 0, 1, 0, 0);
    ctx.clearRect(0, 0, width, height);
    ctx.setTransform(this.view.zoom, 0, 0, this.view.zoom, this.view.panX, this.view.panY);
    if (this.image) ctx.drawImage(this.image, 0, 0);

    if (this.session?.calibration) this.drawGrid(ctx);
    for (const f of this.session?.features ?? []) {
      this.drawFeature(ctx, f.points, f.kind === 'region', f.id === this.view.activeFeature);
    }
    this.drawPendingPairs(ctx);
    if (this.lastFit) this.drawFitOverlay(ctx);
  }

  private drawGrid(ctx: CanvasRenderingContext2D): void {
    const w = this.session?.image.width_px ?? 0;
    const h = this.session?.image.height_px ?? 0;
    ctx.strokeStyle = 'rgba(80, 140, 200, 0.25)';
    ctx.lineWidth = 1 / this.view.zoom;
    const step = 50;
    ctx.beginPath();
    for (let x = 0; x <= w; x += step) {
      ctx.moveTo(x, 0);
      ctx.lineTo(x, h);
    }
    for (let y = 0; y <= h; y += step) {
      ctx.moveTo(0, y);
      ctx.lineTo(w, y);
    }
    ctx.stroke();
  }

  private drawFeature(
    ctx: CanvasRenderingContext2D,
    points: [number, number][],
    closed: boolean,
    active: boolean,
  ): void {
    if (points.length === 0) return;
    ctx.strokeStyle = active ? '#e05b00' : '#777';
    ctx.fillStyle = active ? '#e05b00' : '#777';
    ctx.lineWidth = 2 / this.view.zoom;
    ctx.beginPath();
    ctx.moveTo(points[0][0], points[0][1]);
    for (const [u, v] of points.slice(1)) ctx.lineTo(u, v);
    if (closed && points.length > 2) ctx.closePath();
    ctx.stroke();
    const r = 3 / this.view.zoom;
    for (const [u, v] of points) {
      ctx.beginPath();
      ctx.arc(u, v, r, 0, 2 * Math.PI);
      ctx.fill();
    }
  }

  private drawPendingPairs(ctx: CanvasRenderingContext2D): void {
    ctx.fillStyle = '#1a7f37';
    const r = 4 / this.view.zoom;
    for (const pair of this.pendingPairs) {
      ctx.beginPath();
      ctx.arc(pair.pixel[0], pair.pixel[1], r, 0, 2 * Math.PI);
      ctx.fill();
    }
  }

  private drawFitOverlay(ctx: CanvasRenderingContext2D): void {
    // fit samples are world km; draw them back in pixel space through the
    // inverse of the stored similarity transform
    const cal = this.session?.calibration;
    if (!cal || !this.lastFit || cal.kind !== 'similarity') return;
    const [s, theta] = cal.coefficients;
    const [, , tx, ty] = cal.coefficients;
    const count = Math.min(this.lastFit.samples.length, overlaySampleCount(this.view));
    const stride = Math.max(1, Math.floor(this.lastFit.samples.length / count));
    const a = s * Math.cos(theta);
    const b = s * Math.sin(theta);
    const det = -(a * a + b * b); // flipped-similarity determinant
    ctx.strokeStyle = '#0b66c3';
    ctx.lineWidth = 2 / this.view.zoom;
    ctx.beginPath();
    let first = true;
    for (let i = 0; i < this.lastFit.samples.length; i += stride) {
      const [x, y] = this.lastFit.samples[i];
      const dx = x - tx;
      const dy = y - ty;
      // invert [[a, b], [b, -a]]
      const u = (-a * dx - b * dy) / det;
      const v = (-b * dx + a * dy) / det;
      if (first) {
        ctx.moveTo(u, v);
        first = false;
      } else {
        ctx.lineTo(u, v);
      }
    }
    ctx.closePath();
    ctx.stroke();
  }
}
