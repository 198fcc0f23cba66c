/** Display formatting: everything the engineer reads shows 2 decimals.
 *
 * Rounding is half-to-even so the UI shows exactly what the engine's own
 * renderers print (0.625 displays as 0.62 on both).
 */

export function round2even(value: number): number {
  const scaled = value * 100;
  const floor = Math.floor(scaled);
  const diff = scaled - floor;
  if (diff > 0.5) {
    return (floor + 1) / 100;
  }
  if (diff < 0.5) {
    return floor / 100;
  }
  return (floor % 2 === 0 ? floor : floor + 1) / 100;
}

export function fmt2(value: number | null | undefined): string {
  if (value === null || value === undefined) {
    return "--";
  }
  return round2even(value).toFixed(2);
}

/** Width of a bar in percent for a value on a [0, scale] axis. */
export function barWidth(value: number, scale = 1.0): number {
  if (scale <= 0 || !Number.isFinite(value)) {
    return 0;
  }
  return Math.max(0, Math.min(100, (value / scale) * 100));
}
