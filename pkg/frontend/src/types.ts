// Payload shapes of the cartometer REST API.

export type FeatureKind = 'route' | 'region';
export type DisplayUnit = 'm' | 'km' | 'mi';

export interface SessionFeature {
  id: string;
  kind: FeatureKind;
  name: string;
  points: [number, number][];
}

export interface ControlPointPayload {
  pixel: [number, number];
  world?: [number, number];
  geo?: [number, number];
  label?: string;
}

export interface SessionDoc {
  schema_version: string;
  image: { path: string; width_px: number; height_px: number };
  projection: 'web_mercator' | 'planar_unknown';
  display_unit: DisplayUnit;
  calibration: {
    kind: 'similarity' | 'affine';
    coefficients: number[];
    flip: boolean;
    rms_residual: number;
    control_points: ControlPointPayload[];
  } | null;
  features: SessionFeature[];
}

export interface MeasurementPayload {
  feature_id: string;
  kind: FeatureKind;
  planar: number;
  geodesic: number | null;
  anomaly_ratio: number | null;
  bbox_w: number;
  bbox_h: number;
  bbox_area: number;
  simple: boolean;
  unit: DisplayUnit;
  display: number;
}

export interface CalibrationResult {
  kind: string;
  coefficients: number[];
  flip: boolean;
  rms_residual: number;
}

export interface FitPayload {
  feature_id: string;
  n: number;
  rms: number;
  area: number;
  samples: [number, number][];
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}
