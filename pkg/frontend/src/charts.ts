// SVG builders for the match strip and the polar comparison scatter.
// Built with plain DOM calls so they work identically in the browser
// and under a DOM test environment.

import type { Match, MidPoint, Point } from './types.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

function svgElement<K extends keyof SVGElementTagNameMap>(
  doc: Document,
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const el = doc.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

function polylinePoints(
  values: number[],
  width: number,
  height: number,
  pad: number,
): string {
  const n = values.length;
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  const span = hi - lo || 1;
  const parts: string[] = [];
  for (let i = 0; i < n; i++) {
    const v = values[i] ?? 0;
    const x = pad + ((width - 2 * pad) * i) / Math.max(n - 1, 1);
    const y = height - pad - ((height - 2 * pad) * (v - lo)) / span;
    parts.push(`${x.toFixed(2)},${y.toFixed(2)}`);
  }
  return parts.join(' ');
}

/** Small line chart for one match window, labeled with rank/start/distance. */
export function thumbnailSvg(
  doc: Document,
  match: Match,
  width = 120,
  height = 60,
): SVGSVGElement {
  const svg = svgElement(doc, 'svg', {
    width,
    height,
    viewBox: `0 0 ${width} ${height}`,
    class: 'thumb-chart',
  });
  svg.appendChild(
    svgElement(doc, 'rect', {
      x: 0, y: 0, width, height, fill: 'none', stroke: '#ccc',
    }),
  );
  svg.appendChild(
    svgElement(doc, 'polyline', {
      points: polylinePoints(match.window, width, height, 6),
      fill: 'none',
      stroke: '#2a6f97',
      'stroke-width': 1.5,
    }),
  );
  const label = svgElement(doc, 'text', {
    x: 4, y: 12, 'font-size': 9, fill: '#333',
  });
  label.textContent = `#${match.rank} @${match.start_index} d=${match.distance.toFixed(4)}`;
  svg.appendChild(label);
  return svg;
}

/** Polyline preview of the normalized pattern (unit square, y up). */
export function previewSvg(
  doc: Document,
  pattern: Point[],
  width = 180,
  height = 90,
): SVGSVGElement {
  const svg = svgElement(doc, 'svg', {
    width,
    height,
    viewBox: `0 0 ${width} ${height}`,
    class: 'preview-chart',
  });
  const pad = 6;
  const parts = pattern.map((p) => {
    const x = pad + (width - 2 * pad) * p.x;
    const y = height - pad - (height - 2 * pad) * p.y;
    return `${x.toFixed(2)},${y.toFixed(2)}`;
  });
  svg.appendChild(
    svgElement(doc, 'polyline', {
      points: parts.join(' '),
      fill: 'none',
      stroke: '#444',
      'stroke-width': 1.5,
    }),
  );
  return svg;
}

export interface MidScatter {
  svg: SVGSVGElement;
  /** One circle per response point, same order (reference first). */
  circles: SVGCircleElement[];
}

/**
 * Polar scatter of the comparison points. The reference point sits on
 * the horizontal axis (angle 0); each match point is drawn at its
 * service-reported (x, y) with its label and angle attached as data
 * attributes so interactions and tests can read them back.
 */
export function midScatterSvg(
  doc: Document,
  points: MidPoint[],
  size = 260,
): MidScatter {
  const svg = svgElement(doc, 'svg', {
    width: size,
    height: size,
    viewBox: `0 0 ${size} ${size}`,
    class: 'mid-scatter',
  });
  const pad = 20;
  let maxRadius = 0;
  for (const p of points) {
    if (p.radius > maxRadius) maxRadius = p.radius;
  }
  const scale = (size - 2 * pad) / (maxRadius || 1);
  const originX = pad;
  const originY = size - pad;

  // Quarter-circle grid plus the two axes.
  svg.appendChild(
    svgElement(doc, 'path', {
      d: `M ${originX} ${originY - maxRadius * scale} A ${maxRadius * scale} ${
        maxRadius * scale
      } 0 0 1 ${originX + maxRadius * scale} ${originY}`,
      fill: 'none',
      stroke: '#ddd',
    }),
  );
  svg.appendChild(
    svgElement(doc, 'line', {
      x1: originX, y1: originY, x2: size - pad, y2: originY, stroke: '#999',
    }),
  );
  svg.appendChild(
    svgElement(doc, 'line', {
      x1: originX, y1: originY, x2: originX, y2: pad, stroke: '#999',
    }),
  );

  const circles: SVGCircleElement[] = [];
  for (const p of points) {
    const isReference = p.label === 'P_o';
    const circle = svgElement(doc, 'circle', {
      cx: originX + p.x * scale,
      cy: originY - p.y * scale,
      r: isReference ? 6 : 5,
      fill: isReference ? '#d1495b' : '#2a6f97',
      class: isReference ? 'mid-point mid-reference' : 'mid-point',
      'data-label': p.label,
      'data-angle': p.angle,
      'data-radius': p.radius,
    });
    svg.appendChild(circle);
    circles.push(circle);
  }
  return { svg, circles };
}
