// jsdom has no raster backend; returning null from getContext (instead
// of letting jsdom log "not implemented") exercises the app's fallback
// path without stderr noise.

if (typeof HTMLCanvasElement !== 'undefined') {
  HTMLCanvasElement.prototype.getContext = (() => null) as never;
}
