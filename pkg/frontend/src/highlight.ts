/** Split a context string around its highlighted span.
 *
 * The service sends character offsets relative to the context it sliced.
 * Offsets are clamped defensively so a malformed card renders degraded
 * instead of crashing the review session.
 */

import type { Highlight } from "./api.js";

export interface HighlightSlices {
  before: string;
  mark: string;
  after: string;
}

export function sliceHighlight(context: string, highlight: Highlight): HighlightSlices {
  const start = Math.min(Math.max(0, Math.trunc(highlight.start)), context.length);
  const end = Math.min(Math.max(start, Math.trunc(highlight.end)), context.length);
  return {
    before: context.slice(0, start),
    mark: context.slice(start, end),
    after: context.slice(end),
  };
}
