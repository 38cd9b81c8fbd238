/** Attribution heatmap helpers.
 *
 * Intensity is normalized per item, not per corpus: the strongest positive
 * token in an item always renders at full intensity, so every item's top cue
 * is visible regardless of its absolute magnitude. Tokens with non-positive
 * weight get zero intensity.
 */

export interface TokenCell {
  token: string;
  weight: number;
  /** 0..1 share of the item's maximum positive weight. */
  intensity: number;
}

export function heatmapCells(tokens: [string, number][]): TokenCell[] {
  let maxPositive = 0;
  for (const [, weight] of tokens) {
    if (weight > maxPositive) {
      maxPositive = weight;
    }
  }
  return tokens.map(([token, weight]) => ({
    token,
    weight,
    intensity: maxPositive > 0 && weight > 0 ? weight / maxPositive : 0,
  }));
}

/** CSS background for a cell; transparent at zero, saturated amber at one. */
export function cellBackground(intensity: number): string {
  if (intensity <= 0) {
    return 'transparent';
  }
  return `rgba(245, 158, 11, ${(0.15 + 0.85 * intensity).toFixed(3)})`;
}
