// Minimal deterministic SVG emission: fixed canvas, fixed axis policy,
// numbers formatted without locale influence so re-renders are
// byte-identical.

export const WIDTH = 720;
export const HEIGHT = 440;
export const MARGIN = { top: 48, right: 24, bottom: 56, left: 76 };

export interface Scale {
  (value: number): number;
  ticks: number[];
}

export function fmt(x: number): string {
  if (!Number.isFinite(x)) {
    throw new Error(`non-finite coordinate ${x}`);
  }
  const rounded = Math.round(x * 100) / 100;
  return Object.is(rounded, -0) ? "0" : String(rounded);
}

export function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const span = hi > lo ? hi - lo : 1;
  const scale = ((value: number) =>
    outLo + ((value - lo) / span) * (outHi - outLo)) as Scale;
  scale.ticks = linearTicks(lo, hi);
  return scale;
}

/** log2 positions; ticks at powers of two, the fixed policy for k and L. */
export function log2Scale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  if (lo <= 0) {
    throw new Error("log scale needs positive domain");
  }
  const llo = Math.log2(lo);
  const lhi = Math.log2(hi);
  const span = lhi > llo ? lhi - llo : 1;
  const scale = ((value: number) =>
    outLo + ((Math.log2(value) - llo) / span) * (outHi - outLo)) as Scale;
  const ticks: number[] = [];
  for (let e = Math.ceil(llo); e <= Math.floor(lhi); e += 1) {
    ticks.push(2 ** e);
  }
  scale.ticks = ticks.length >= 2 ? ticks : [lo, hi];
  return scale;
}

function linearTicks(lo: number, hi: number): number[] {
  const span = hi - lo || 1;
  const step = 10 ** Math.floor(Math.log10(span / 4));
  const mult = span / 4 / step >= 5 ? 5 : span / 4 / step >= 2 ? 2 : 1;
  const inc = step * mult;
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / inc) * inc; t <= hi + 1e-9; t += inc) {
    ticks.push(Math.round(t * 1e6) / 1e6);
  }
  return ticks;
}

export function tickLabel(value: number): string {
  if (value >= 1024 && Number.isInteger(Math.log2(value))) {
    return `2^${Math.log2(value)}`;
  }
  if (value >= 100000) {
    return value.toExponential(1).replace("+", "");
  }
  return String(value);
}

export class SvgDoc {
  private parts: string[] = [];

  constructor(title: string) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
        `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="monospace">`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
      `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="15">${esc(title)}</text>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string): void {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="1.8"/>`,
    );
  }

  polygon(points: Array<[number, number]>, fill: string): void {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(`<polygon points="${pts}" fill="${fill}" stroke="none"/>`);
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${stroke}" stroke-width="1"/>`,
    );
  }

  text(x: number, y: number, content: string, anchor = "middle", size = 11): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" font-size="${size}">` +
        `${esc(content)}</text>`,
    );
  }

  axes(xScale: Scale, yScale: Scale, xLabel: string, yLabel: string): void {
    const x0 = MARGIN.left;
    const x1 = WIDTH - MARGIN.right;
    const y0 = HEIGHT - MARGIN.bottom;
    const y1 = MARGIN.top;
    this.line(x0, y0, x1, y0, "#222");
    this.line(x0, y0, x0, y1, "#222");
    for (const t of xScale.ticks) {
      const x = xScale(t);
      this.line(x, y0, x, y0 + 4, "#222");
      this.text(x, y0 + 18, tickLabel(t));
    }
    for (const t of yScale.ticks) {
      const y = yScale(t);
      this.line(x0 - 4, y, x0, y, "#222");
      this.text(x0 - 8, y + 4, tickLabel(t), "end");
      this.line(x0, y, x1, y, "#eee");
    }
    this.text((x0 + x1) / 2, HEIGHT - 14, xLabel);
    this.parts.push(
      `<text x="18" y="${fmt((y0 + y1) / 2)}" text-anchor="middle" font-size="11" ` +
        `transform="rotate(-90 18 ${fmt((y0 + y1) / 2)})">${esc(yLabel)}</text>`,
    );
  }

  legend(entries: Array<[string, string]>): void {
    let y = MARGIN.top + 6;
    for (const [label, color] of entries) {
      const x = WIDTH - MARGIN.right - 150;
      this.line(x, y, x + 22, y, color);
      this.text(x + 28, y + 4, label, "start");
      y += 16;
    }
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}
