import { ApiClient } from "./api.js";
import { el } from "./components.js";
import { defaultQuery, parseHash } from "./state.js";
import {
  emotionView,
  exploreView,
  imageView,
  searchView,
  uploadView,
} from "./views.js";

const API_BASE_KEY = "emopalette-api-base";

export function startApp(root: HTMLElement): void {
  const stored = window.localStorage.getItem(API_BASE_KEY);
  let api = new ApiClient(stored ?? "http://127.0.0.1:8750");

  const nav = el("nav", "tabs");
  for (const [label, hash] of [
    ["search", "#/search"],
    ["upload", "#/upload"],
    ["explore", "#/explore"],
  ] as const) {
    const link = el("a", "tab", label) as HTMLAnchorElement;
    link.href = hash;
    nav.appendChild(link);
  }
  const main = el("main", "view");

  const footer = el("footer", "config");
  const baseInput = el("input", "api-base") as HTMLInputElement;
  baseInput.value = api.baseUrl;
  baseInput.addEventListener("change", () => {
    window.localStorage.setItem(API_BASE_KEY, baseInput.value);
    api = new ApiClient(baseInput.value);
    render();
  });
  footer.append(el("span", "", "API: "), baseInput);

  root.append(nav, main, footer);

  const navigate = (hash: string) => {
    window.location.hash = hash;
  };

  async function render(): Promise<void> {
    const route = parseHash(window.location.hash);
    switch (route.view) {
      case "upload":
        uploadView(main, api, navigate);
        break;
      case "image":
        await imageView(main, api, route.id!, navigate);
        break;
      case "explore":
        await exploreView(main, api, navigate);
        break;
      case "emotion":
        await emotionView(main, api, route.id!);
        break;
      default:
        await searchView(main, api, route.query ?? defaultQuery(), navigate);
    }
  }

  window.addEventListener("hashchange", render);
  render();
}
