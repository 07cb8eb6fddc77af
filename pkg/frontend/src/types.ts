// JSON shapes exchanged with the search service, plus the client-side
// sketch state. Field names mirror the service schema exactly so the
// objects can be posted without translation.

export type MetricName =
  | 'manhattan'
  | 'euclidean'
  | 'cosine'
  | 'jaccard'
  | 'dice'
  | 'pearson'
  | 'nmi'
  | 'jsd'
  | 'mid';

export type RedundancyKindName =
  | 'none'
  | 'equidistant'
  | 'arealine'
  | 'cloud'
  | 'gausscloud';

export interface Point {
  x: number;
  y: number;
}

export interface RedundancyControls {
  kind: RedundancyKindName;
  n_points: number;
  copies: number;
  shift: number;
  eta: number;
  seed: number;
}

export interface SketchState {
  stroke: Point[];
  resampleCount: number;
  preview: Point[];
  droppedSamples: number;
  metric: MetricName;
  redundancy: RedundancyControls;
  datasetId: number | null;
}

export interface DatasetCreated {
  id: number;
  length: number;
  preview: number[];
}

export interface PatternCreated {
  id: number;
  point_count: number;
  reordered: boolean;
}

export interface SearchRequestBody {
  pattern_id: number;
  dataset_id: number;
  metric: MetricName;
  redundancy: RedundancyControls;
  b: number;
  stride: number;
  top_k: number;
  exclusion?: number | null;
  window_length?: number | null;
  mode?: string | null;
}

export interface Match {
  start_index: number;
  distance: number;
  rank: number;
  window: number[];
}

export interface SearchResponse {
  result_id: number;
  metric: string;
  mode: string;
  matches: Match[];
}

export interface MidPoint {
  label: string;
  radius: number;
  angle: number;
  x: number;
  y: number;
}

export interface MidResponse {
  result_id: number;
  points: MidPoint[];
}

export const METRICS: MetricName[] = [
  'manhattan',
  'euclidean',
  'cosine',
  'jaccard',
  'dice',
  'pearson',
  'nmi',
  'jsd',
  'mid',
];

export const REDUNDANCY_KINDS: RedundancyKindName[] = [
  'none',
  'equidistant',
  'arealine',
  'cloud',
  'gausscloud',
];

// Control ranges offered by the UI; these match the harness sweep so a
// hand-driven exploration covers the same grid as the batch runs.
export const N_CHOICES = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 25, 50, 75, 100];
export const ETA_CHOICES = [0.025, 0.1, 0.2];
