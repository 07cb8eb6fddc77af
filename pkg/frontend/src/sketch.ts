// Stroke-to-pattern conversion. The preview produced here is exactly the
// point list submitted to the service: samples with non-increasing x are
// dropped, the remainder is resampled at uniform x by linear
// interpolation, and both axes are min-max normalized into the unit
// square (canvas y grows downward, so y flips).
//
// The server applies the same resample-then-normalize treatment, which
// makes the round trip idempotent: what you see is what is searched.

import type { Point } from './types.js';

export interface CleanedStroke {
  points: Point[];
  dropped: number;
}

/** Keep only samples whose x strictly increases; count what was cut. */
export function dropBacktracking(stroke: Point[]): CleanedStroke {
  const points: Point[] = [];
  let dropped = 0;
  for (const p of stroke) {
    const last = points[points.length - 1];
    if (last !== undefined && p.x <= last.x) {
      dropped += 1;
      continue;
    }
    points.push({ x: p.x, y: p.y });
  }
  return { points, dropped };
}

/** Piecewise-linear value of the polyline at position x. */
function interpolateAt(points: Point[], x: number): number {
  const first = points[0];
  const last = points[points.length - 1];
  if (first === undefined || last === undefined) {
    throw new Error('cannot interpolate an empty stroke');
  }
  if (x <= first.x) return first.y;
  if (x >= last.x) return last.y;
  for (let i = 1; i < points.length; i++) {
    const a = points[i - 1];
    const b = points[i];
    if (a === undefined || b === undefined) continue;
    if (x <= b.x) {
      const t = (x - a.x) / (b.x - a.x);
      return a.y + t * (b.y - a.y);
    }
  }
  return last.y;
}

/** Resample the cleaned stroke at `count` uniform x positions. */
export function resampleUniform(points: Point[], count: number): Point[] {
  if (count < 2) {
    throw new Error('resample count must be at least 2');
  }
  const first = points[0];
  const last = points[points.length - 1];
  if (first === undefined || last === undefined || points.length < 2) {
    throw new Error('need at least 2 samples with distinct x to resample');
  }
  const out: Point[] = [];
  for (let i = 0; i < count; i++) {
    const x = first.x + ((last.x - first.x) * i) / (count - 1);
    out.push({ x, y: interpolateAt(points, x) });
  }
  return out;
}

/** Min-max normalize values to [0, 1]; a constant run maps to 0.5. */
export function normalizeValues(values: number[]): number[] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (hi === lo) return values.map(() => 0.5);
  return values.map((v) => (v - lo) / (hi - lo));
}

export interface SketchResult {
  pattern: Point[];
  dropped: number;
}

/**
 * Full pipeline from raw canvas samples (pixel coordinates, y downward)
 * to the normalized pattern submitted to the service.
 */
export function sketchToPattern(stroke: Point[], count: number): SketchResult {
  const cleaned = dropBacktracking(stroke);
  if (cleaned.points.length < 2) {
    throw new Error('sketch needs at least 2 samples with increasing x');
  }
  const resampled = resampleUniform(cleaned.points, count);
  const ys = normalizeValues(resampled.map((p) => -p.y)); // flip canvas y
  const pattern = resampled.map((_, i) => ({
    x: count === 1 ? 0 : i / (count - 1),
    y: ys[i] ?? 0.5,
  }));
  return { pattern, dropped: cleaned.dropped };
}
