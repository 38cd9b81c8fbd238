/** Small presentation helpers shared by the views. */

export function percent(value: number): string {
  return `${(value * 100).toFixed(1)}%`;
}

export function optionLetter(index: number): string {
  return String.fromCharCode('A'.charCodeAt(0) + index);
}

export function shortHash(hash: string): string {
  return hash.length > 12 ? `${hash.slice(0, 12)}…` : hash;
}

export function labelBadgeClass(label: string): string {
  return `badge badge-${label}`;
}
