/** Query state: serializable to the /search URL grammar and to the page
 * hash, so every view is deep-linkable and back/forward restores state. */

export interface QueryState {
  emotion: string;
  intensity: string;
  hedges: string[]; // written order: ["not", "very", "more-or-less"] subset
  offset: number;
  limit: number;
}

export const DEFAULT_LIMIT = 20;

export function defaultQuery(): QueryState {
  return { emotion: "", intensity: "high", hedges: [], offset: 0, limit: DEFAULT_LIMIT };
}

/** Exact /search URL for a query: emotion, intensity, then hedges
 * (comma-joined, omitted when empty), then pagination when non-default. */
export function buildSearchUrl(state: QueryState): string {
  const params = new URLSearchParams();
  params.set("emotion", state.emotion);
  params.set("intensity", state.intensity);
  if (state.hedges.length > 0) {
    params.set("hedges", state.hedges.join(","));
  }
  if (state.offset !== 0) params.set("offset", String(state.offset));
  if (state.limit !== DEFAULT_LIMIT) params.set("limit", String(state.limit));
  return `/search?${params.toString()}`;
}

export function queryToHash(state: QueryState): string {
  return `#/search?${buildSearchUrl(state).split("?")[1]}`;
}

export function queryFromParams(params: URLSearchParams): QueryState {
  const hedges = (params.get("hedges") ?? "")
    .split(",")
    .map((h) => h.trim())
    .filter((h) => h.length > 0);
  return {
    emotion: params.get("emotion") ?? "",
    intensity: params.get("intensity") ?? "high",
    hedges,
    offset: Number(params.get("offset") ?? 0),
    limit: Number(params.get("limit") ?? DEFAULT_LIMIT),
  };
}

export interface Route {
  view: "search" | "upload" | "image" | "explore" | "emotion";
  id?: string;
  query?: QueryState;
}

export function parseHash(hash: string): Route {
  const clean = hash.replace(/^#\/?/, "");
  const [path, queryString] = clean.split("?");
  const parts = path.split("/").filter((p) => p.length > 0);
  if (parts[0] === "upload") return { view: "upload" };
  if (parts[0] === "image" && parts[1]) return { view: "image", id: parts[1] };
  if (parts[0] === "explore" && parts[1]) return { view: "emotion", id: parts[1] };
  if (parts[0] === "explore") return { view: "explore" };
  return {
    view: "search",
    query: queryFromParams(new URLSearchParams(queryString ?? "")),
  };
}
