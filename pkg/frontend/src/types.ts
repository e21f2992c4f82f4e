/** Payload shapes of the emopalette HTTP API (single source of truth:
 * the UI renders these values verbatim and never recomputes scores). */

export interface PaletteEntry {
  hue: string;
  saturation: string;
  intensity: string;
  proportion: number;
  hex: string;
}

export interface EmotionScore {
  emotion: string;
  jaccard: number;
}

export interface ImageEntry {
  id: string;
  source: string;
  palette: PaletteEntry[];
  basic_percent: Record<string, number>;
  scores: EmotionScore[];
  top_emotion: string | null;
  thumbnail: string;
}

export interface SearchResult {
  id: string;
  degree: number;
  jaccard: number;
  thumbnail: string;
}

export interface SearchResponse {
  query: { emotion: string; intensity: string; hedges: string[] };
  total: number;
  results: SearchResult[];
}

export interface KbPaletteEntry {
  hue: string;
  saturation: string;
  intensity: string;
  frequency: number;
  share: number;
  hex: string;
}

export interface EmotionPalettePayload {
  emotion: string;
  image_count: number;
  entries: KbPaletteEntry[];
  basic_percent: Record<string, number>;
}

export interface ApiError {
  status: number;
  detail: string;
  token?: string;
}
