/**
 * Deterministic color helpers: a sequential map for magnitudes, a cyclic map
 * for phases in units of pi, and a fixed palette for curve series.
 */

export const SERIES_PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

/** viridis-like anchor stops, interpolated linearly in RGB */
const SEQUENTIAL_STOPS: Array<[number, number, number]> = [
  [68, 1, 84],
  [59, 82, 139],
  [33, 145, 140],
  [94, 201, 98],
  [253, 231, 37],
];

function clamp01(t: number): number {
  return Math.max(0, Math.min(1, t));
}

function toHex(rgb: [number, number, number]): string {
  return (
    "#" +
    rgb
      .map((c) => Math.round(c).toString(16).padStart(2, "0"))
      .join("")
  );
}

export function sequentialColor(t: number): string {
  const u = clamp01(t) * (SEQUENTIAL_STOPS.length - 1);
  const i = Math.min(Math.floor(u), SEQUENTIAL_STOPS.length - 2);
  const frac = u - i;
  const a = SEQUENTIAL_STOPS[i];
  const b = SEQUENTIAL_STOPS[i + 1];
  return toHex([
    a[0] + frac * (b[0] - a[0]),
    a[1] + frac * (b[1] - a[1]),
    a[2] + frac * (b[2] - a[2]),
  ]);
}

/**
 * Cyclic map over phase/pi in [-1, 1]: hue wheel with matched endpoints so
 * -1 and +1 (the same angle) share a color.
 */
export function cyclicColor(phaseOverPi: number): string {
  const wrapped = ((phaseOverPi % 2) + 3) % 2; // [-1,1] -> [0,2)
  const hue = 180 * wrapped; // full wheel over one phase cycle
  return hslToHex(hue, 0.75, 0.55);
}

function hslToHex(h: number, s: number, l: number): string {
  const c = (1 - Math.abs(2 * l - 1)) * s;
  const hp = ((h % 360) + 360) % 360 / 60;
  const x = c * (1 - Math.abs((hp % 2) - 1));
  let rgb: [number, number, number];
  if (hp < 1) rgb = [c, x, 0];
  else if (hp < 2) rgb = [x, c, 0];
  else if (hp < 3) rgb = [0, c, x];
  else if (hp < 4) rgb = [0, x, c];
  else if (hp < 5) rgb = [x, 0, c];
  else rgb = [c, 0, x];
  const m = l - c / 2;
  return toHex([(rgb[0] + m) * 255, (rgb[1] + m) * 255, (rgb[2] + m) * 255]);
}
