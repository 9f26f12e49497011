// Display-only rounding. Per the single-source-of-truth rule the UI never
// derives statistics; these helpers just shape numbers coming off the wire.

const GROUPED = new Intl.NumberFormat("en-US", { maximumFractionDigits: 0 });

/** Rounded LR with thousands separators, e.g. 201124.1163 -> "201,124". */
export function formatLrRounded(lr: number): string {
  return GROUPED.format(Math.round(lr));
}

/** Full precision string that survives a Number() round-trip. */
export function formatFull(value: number): string {
  return String(value);
}

/** Probabilities shown with 6 significant digits, full value on hover. */
export function formatProbability(p: number): string {
  if (p === 0 || p === 1) return String(p);
  return p.toPrecision(6).replace(/\.?0+($|e)/, "$1");
}
