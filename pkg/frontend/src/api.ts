import { buildSearchUrl, QueryState } from "./state.js";
import {
  ApiError,
  EmotionPalettePayload,
  ImageEntry,
  SearchResponse,
} from "./types.js";

async function parseError(response: Response): Promise<ApiError> {
  let detail = `${response.status} ${response.statusText}`;
  let token: string | undefined;
  try {
    const body = await response.json();
    if (body.detail) detail = body.detail;
    if (body.token !== undefined) token = body.token;
  } catch {
    // non-JSON error body; keep the status line
  }
  return { status: response.status, detail, token };
}

export class ApiClient {
  baseUrl: string;
  private searchSeq = 0;

  constructor(baseUrl = "") {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(this.baseUrl + path);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  /** Search with a sequence number; stale responses resolve to null so the
   * caller can discard results that were overtaken by a newer query. */
  async search(state: QueryState): Promise<SearchResponse | null> {
    const seq = ++this.searchSeq;
    const payload = await this.getJson<SearchResponse>(buildSearchUrl(state));
    if (seq !== this.searchSeq) return null;
    return payload;
  }

  async emotions(): Promise<string[]> {
    const payload = await this.getJson<{ emotions: string[] }>("/emotions");
    return payload.emotions;
  }

  emotionPalette(name: string): Promise<EmotionPalettePayload> {
    return this.getJson<EmotionPalettePayload>(
      `/emotions/${encodeURIComponent(name)}/palette`,
    );
  }

  getImage(id: string): Promise<ImageEntry> {
    return this.getJson<ImageEntry>(`/images/${encodeURIComponent(id)}`);
  }

  async upload(file: File | Blob): Promise<ImageEntry> {
    const form = new FormData();
    form.append("file", file);
    const response = await fetch(this.baseUrl + "/images", {
      method: "POST",
      body: form,
    });
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as ImageEntry;
  }

  thumbnailUrl(path: string): string {
    return this.baseUrl + path;
  }
}
