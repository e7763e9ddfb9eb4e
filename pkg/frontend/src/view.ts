// View state: zoom/pan over the map image plus the active feature and
// display unit. Navigation is strictly client-side; it never touches
// session geometry on the server.

import type { DisplayUnit } from './types.js';

export interface ViewState {
  zoom: number;
  panX: number;
  panY: number;
  activeFeature: string | null;
  displayUnit: DisplayUnit;
}

export function initialView(): ViewState {
  return { zoom: 1, panX: 0, panY: 0, activeFeature: null, displayUnit: 'km' };
}

/** Screen pixel -> image pixel, snapped to integers (stored granularity). */
export function screenToImage(view: ViewState, sx: number, sy: number): [number, number] {
  return [Math.round((sx - view.panX) / view.zoom), Math.round((sy - view.panY) / view.zoom)];
}

/** Image pixel -> screen pixel (exact, no snapping). */
export function imageToScreen(view: ViewState, u: number, v: number): [number, number] {
  return [u * view.zoom + view.panX, v * view.zoom + view.panY];
}

/** Zoom by `factor` keeping the image point under (sx, sy) fixed on screen. */
export function zoomAt(view: ViewState, sx: number, sy: number, factor: number): ViewState {
  const zoom = Math.min(64, Math.max(1 / 16, view.zoom * factor));
  const scale = zoom / view.zoom;
  return {
    ...view,
    zoom,
    panX: sx - (sx - view.panX) * scale,
    panY: sy - (sy - view.panY) * scale,
  };
}

export function panBy(view: ViewState, dx: number, dy: number): ViewState {
  return { ...view, panX: view.panX + dx, panY: view.panY + dy };
}

/** Sample count for the fitted-boundary overlay; scales with zoom so the
 * curve is redrawn from fresh samples instead of a stretched raster. */
export function overlaySampleCount(view: ViewState, base = 128): number {
  return Math.min(4096, Math.max(base, Math.round(base * view.zoom)));
}
