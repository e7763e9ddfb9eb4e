// Readout formatting. Values arrive already converted by the server
// (MeasurementPayload.display carries the number in the display unit).

import type { DisplayUnit } from './types.js';

const LENGTH_DECIMALS: Record<DisplayUnit, number> = { km: 3, m: 1, mi: 3 };

export function formatLength(value: number, unit: DisplayUnit): string {
  return `${value.toFixed(LENGTH_DECIMALS[unit])} ${unit}`;
}

export function formatArea(value: number, unit: DisplayUnit): string {
  return `${value.toFixed(LENGTH_DECIMALS[unit])} ${unit}²`;
}

export function formatReadout(value: number, unit: DisplayUnit, kind: 'route' | 'region'): string {
  return kind === 'route' ? formatLength(value, unit) : formatArea(value, unit);
}

export function formatResidual(value: number, unit: DisplayUnit): string {
  return `${value.toFixed(3)} ${unit}`;
}

export function formatRms(value: number): string {
  return value < 1e-3 ? value.toExponential(2) : value.toFixed(4);
}
