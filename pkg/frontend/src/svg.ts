/**
 * Minimal deterministic SVG document builder: fixed-precision coordinates,
 * no timestamps, no randomness, so identical inputs give identical bytes.
 */

export function fmt(value: number): string {
  if (!Number.isFinite(value)) {
    throw new Error(`cannot place non-finite coordinate ${value}`);
  }
  return Number(value.toFixed(3)).toString();
}

function escapeText(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export class SvgDoc {
  private readonly parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
  ) {}

  open(tag: string, attrs: Record<string, string | number> = {}): void {
    this.parts.push(`<${tag}${SvgDoc.renderAttrs(attrs)}>`);
  }

  close(tag: string): void {
    this.parts.push(`</${tag}>`);
  }

  element(tag: string, attrs: Record<string, string | number> = {}): void {
    this.parts.push(`<${tag}${SvgDoc.renderAttrs(attrs)}/>`);
  }

  text(content: string, attrs: Record<string, string | number>): void {
    this.parts.push(`<text${SvgDoc.renderAttrs(attrs)}>${escapeText(content)}</text>`);
  }

  polyline(points: Array<[number, number]>, attrs: Record<string, string | number>): void {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.element("polyline", { points: pts, fill: "none", ...attrs });
  }

  polygon(points: Array<[number, number]>, attrs: Record<string, string | number>): void {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.element("polygon", { points: pts, ...attrs });
  }

  render(): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" ` +
        `viewBox="0 0 ${this.width} ${this.height}" font-family="Helvetica, Arial, sans-serif">`,
      `<rect width="${this.width}" height="${this.height}" fill="#ffffff"/>`,
      ...this.parts,
      "</svg>",
    ].join("\n");
  }

  private static renderAttrs(attrs: Record<string, string | number>): string {
    const entries = Object.entries(attrs);
    if (entries.length === 0) return "";
    return (
      " " +
      entries
        .map(([key, value]) => `${key}="${typeof value === "number" ? fmt(value) : value}"`)
        .join(" ")
    );
  }
}

export interface Scale {
  toPixel(value: number): number;
  readonly min: number;
  readonly max: number;
}

export function linearScale(min: number, max: number, pixelLo: number, pixelHi: number): Scale {
  const span = max - min || 1;
  return {
    min,
    max,
    toPixel: (v: number) => pixelLo + ((v - min) / span) * (pixelHi - pixelLo),
  };
}

/** round-number ticks covering [min, max], at most `count` of them */
export function ticks(min: number, max: number, count: number): number[] {
  const span = max - min || 1;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 5 * step, 10 * step];
  const chosen = candidates.find((s) => span / s <= count) ?? 10 * step;
  const out: number[] = [];
  for (let v = Math.ceil(min / chosen) * chosen; v <= max + 1e-9 * span; v += chosen) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}
