// Client-side mirror of the server's metric/redundancy compatibility
// rule, used only to warn before submission. The server remains the
// authority; a submission that slips past this check still gets a 422
// with the full explanation.

import type { MetricName, RedundancyKindName } from './types.js';

export const POINT_METRICS: MetricName[] = ['manhattan', 'euclidean', 'pearson'];

export const PAIRING_BREAKING_KINDS: RedundancyKindName[] = [
  'arealine',
  'cloud',
  'gausscloud',
];

/**
 * Return a warning string when the selected metric cannot run under the
 * selected redundancy kind, or null when the combination is fine.
 */
export function capabilityWarning(
  metric: MetricName,
  kind: RedundancyKindName,
): string | null {
  if (POINT_METRICS.includes(metric) && PAIRING_BREAKING_KINDS.includes(kind)) {
    return (
      `${metric} compares vectors point by point, so both inputs must ` +
      `keep the same number of data points in the same pairing order; ` +
      `"${kind}" redundancy breaks that. Use equidistant redundancy or ` +
      `a grouping metric instead.`
    );
  }
  return null;
}
