import { describe, expect, it } from "vitest";

import {
  buildSearchUrl,
  defaultQuery,
  parseHash,
  queryFromParams,
  queryToHash,
} from "../src/state.js";

describe("buildSearchUrl", () => {
  it("produces the exact grammar for trust + very + high", () => {
    const url = buildSearchUrl({
      emotion: "trust",
      intensity: "high",
      hedges: ["very"],
      offset: 0,
      limit: 20,
    });
    expect(url).toBe("/search?emotion=trust&intensity=high&hedges=very");
  });

  it("omits the hedges parameter when no hedges are selected", () => {
    const url = buildSearchUrl({
      emotion: "fear",
      intensity: "low",
      hedges: [],
      offset: 0,
      limit: 20,
    });
    expect(url).toBe("/search?emotion=fear&intensity=low");
  });

  it("joins multiple hedges in written order", () => {
    const url = buildSearchUrl({
      emotion: "love",
      intensity: "medium",
      hedges: ["not", "very"],
      offset: 0,
      limit: 20,
    });
    expect(decodeURIComponent(url)).toBe(
      "/search?emotion=love&intensity=medium&hedges=not,very",
    );
  });

  it("appends pagination only when non-default", () => {
    const url = buildSearchUrl({
      emotion: "trust",
      intensity: "high",
      hedges: [],
      offset: 5,
      limit: 10,
    });
    expect(url).toBe("/search?emotion=trust&intensity=high&offset=5&limit=10");
  });
});

describe("hash routing", () => {
  it("round-trips query state through the hash", () => {
    const state = {
      emotion: "shame",
      intensity: "medium",
      hedges: ["not", "more-or-less"],
      offset: 0,
      limit: 20,
    };
    const route = parseHash(queryToHash(state));
    expect(route.view).toBe("search");
    expect(route.query).toEqual(state);
  });

  it("parses view routes", () => {
    expect(parseHash("#/upload").view).toBe("upload");
    expect(parseHash("#/image/abc123")).toEqual({ view: "image", id: "abc123" });
    expect(parseHash("#/explore").view).toBe("explore");
    expect(parseHash("#/explore/anger")).toEqual({ view: "emotion", id: "anger" });
    expect(parseHash("").view).toBe("search");
  });

  it("default query is high intensity with no hedges", () => {
    const q = defaultQuery();
    expect(q.intensity).toBe("high");
    expect(q.hedges).toEqual([]);
  });

  it("parses hedges list from params", () => {
    const q = queryFromParams(new URLSearchParams("emotion=fear&intensity=low&hedges=not,very"));
    expect(q.hedges).toEqual(["not", "very"]);
  });
});
