import { ApiClient } from "./api.js";
import {
  basicColorBar,
  degreeBadge,
  el,
  errorBox,
  heatmapTable,
  imagePaletteStrip,
  kbPaletteStrip,
  scoreList,
} from "./components.js";
import { QueryState, queryToHash } from "./state.js";
import { ApiError, ImageEntry } from "./types.js";

const HEDGE_ORDER = ["not", "very", "more-or-less"];
const INTENSITIES = ["low", "medium", "high"];

function describeError(error: unknown): string {
  const apiError = error as ApiError;
  if (apiError && apiError.detail) {
    return apiError.token !== undefined
      ? `${apiError.detail} (token: ${apiError.token})`
      : apiError.detail;
  }
  return String(error);
}

/** Compose a query from form controls, issue /search, render ranked
 * thumbnails with degree badges. Values are rendered verbatim from the
 * payload; stale responses (superseded queries) are dropped by the client. */
export async function searchView(
  container: HTMLElement,
  api: ApiClient,
  state: QueryState,
  navigate: (hash: string) => void,
): Promise<void> {
  container.textContent = "";
  const form = el("form", "query-builder");

  const emotionSelect = el("select", "emotion-select");
  emotionSelect.name = "emotion";
  try {
    const emotions = await api.emotions();
    for (const emotion of emotions) {
      const option = el("option", "", emotion);
      option.value = emotion;
      if (emotion === state.emotion) option.selected = true;
      emotionSelect.appendChild(option);
    }
    if (!state.emotion && emotions.length > 0) state.emotion = emotions[0];
  } catch (error) {
    container.appendChild(
      errorBox(describeError(error), () => searchView(container, api, state, navigate)),
    );
    return;
  }

  const intensitySelect = el("select", "intensity-select");
  intensitySelect.name = "intensity";
  for (const term of INTENSITIES) {
    const option = el("option", "", term);
    option.value = term;
    if (term === state.intensity) option.selected = true;
    intensitySelect.appendChild(option);
  }

  const hedgeBoxes: HTMLInputElement[] = [];
  const hedgeWrap = el("span", "hedge-toggles");
  for (const hedge of HEDGE_ORDER) {
    const label = el("label", "hedge-toggle");
    const box = el("input") as HTMLInputElement;
    box.type = "checkbox";
    box.value = hedge;
    box.checked = state.hedges.includes(hedge);
    label.appendChild(box);
    label.appendChild(document.createTextNode(hedge));
    hedgeWrap.appendChild(label);
    hedgeBoxes.push(box);
  }

  const submit = el("button", "search-button", "search");
  submit.type = "submit";
  form.append(emotionSelect, hedgeWrap, intensitySelect, submit);

  const results = el("div", "search-results");
  container.append(form, results);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const next: QueryState = {
      emotion: emotionSelect.value,
      intensity: intensitySelect.value,
      hedges: hedgeBoxes.filter((b) => b.checked).map((b) => b.value),
      offset: 0,
      limit: state.limit,
    };
    navigate(queryToHash(next));
  });

  if (!state.emotion) return;
  await runSearch(results, api, state, navigate);
}

async function runSearch(
  results: HTMLElement,
  api: ApiClient,
  state: QueryState,
  navigate: (hash: string) => void,
): Promise<void> {
  results.textContent = "loading…";
  let payload;
  try {
    payload = await api.search(state);
  } catch (error) {
    results.textContent = "";
    results.appendChild(
      errorBox(describeError(error), () => runSearch(results, api, state, navigate)),
    );
    return;
  }
  if (payload === null) return; // superseded by a newer query
  results.textContent = "";
  if (payload.results.length === 0) {
    results.appendChild(el("p", "empty-state", "no matching images"));
    return;
  }
  const grid = el("div", "result-grid");
  for (const result of payload.results) {
    const card = el("div", "result-card");
    card.dataset.imageId = result.id;
    const img = el("img", "result-thumb") as HTMLImageElement;
    img.src = api.thumbnailUrl(result.thumbnail);
    img.alt = result.id;
    card.appendChild(img);
    card.appendChild(degreeBadge(result.degree));
    card.appendChild(el("span", "jaccard-note", `J=${result.jaccard.toFixed(4)}`));
    card.addEventListener("click", () => navigate(`#/image/${result.id}`));
    grid.appendChild(card);
  }
  results.appendChild(grid);
}

/** Upload an image, then render its detail view (palette swatches,
 * basic-color bar, ranked emotion rows). */
export function uploadView(
  container: HTMLElement,
  api: ApiClient,
  navigate: (hash: string) => void,
): void {
  container.textContent = "";
  const form = el("form", "upload-form");
  const input = el("input", "upload-input") as HTMLInputElement;
  input.type = "file";
  input.name = "file";
  input.accept = "image/png,image/jpeg";
  const submit = el("button", "upload-button", "upload and tag");
  submit.type = "submit";
  form.append(input, submit);
  const target = el("div", "upload-result");
  container.append(form, target);

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const file = input.files && input.files[0];
    if (!file) return;
    target.textContent = "uploading…";
    try {
      const entry = await api.upload(file);
      target.textContent = "";
      renderImageDetail(target, api, entry, navigate);
    } catch (error) {
      target.textContent = "";
      target.appendChild(errorBox(describeError(error)));
    }
  });
}

export function renderImageDetail(
  container: HTMLElement,
  api: ApiClient,
  entry: ImageEntry,
  navigate: (hash: string) => void,
): void {
  const detail = el("div", "image-detail");
  detail.dataset.imageId = entry.id;
  const img = el("img", "detail-thumb") as HTMLImageElement;
  img.src = api.thumbnailUrl(entry.thumbnail);
  img.alt = entry.id;
  detail.appendChild(img);
  if (entry.top_emotion) {
    detail.appendChild(el("h3", "top-emotion", entry.top_emotion));
  }
  detail.appendChild(el("h4", "", "dominant fuzzy palette"));
  detail.appendChild(imagePaletteStrip(entry.palette));
  detail.appendChild(el("h4", "", "basic colors"));
  detail.appendChild(basicColorBar(entry.basic_percent));
  detail.appendChild(el("h4", "", "emotions"));
  detail.appendChild(scoreList(entry.scores));
  container.appendChild(detail);
}

export async function imageView(
  container: HTMLElement,
  api: ApiClient,
  id: string,
  navigate: (hash: string) => void,
): Promise<void> {
  container.textContent = "";
  try {
    const entry = await api.getImage(id);
    renderImageDetail(container, api, entry, navigate);
  } catch (error) {
    container.appendChild(errorBox(describeError(error)));
  }
}

/** All emotion palettes plus the basic-color heatmap. */
export async function exploreView(
  container: HTMLElement,
  api: ApiClient,
  navigate: (hash: string) => void,
): Promise<void> {
  container.textContent = "";
  let emotions: string[];
  try {
    emotions = await api.emotions();
  } catch (error) {
    container.appendChild(
      errorBox(describeError(error), () => exploreView(container, api, navigate)),
    );
    return;
  }
  const cards = el("div", "palette-cards");
  const heatmapRows: Array<{ emotion: string; percent: Record<string, number> }> = [];
  let columns: string[] = [];
  for (const emotion of emotions) {
    const payload = await api.emotionPalette(emotion);
    const card = el("div", "palette-card");
    card.dataset.emotion = emotion;
    const title = el("h3", "", `${emotion} (${payload.image_count} images)`);
    title.addEventListener("click", () => navigate(`#/explore/${emotion}`));
    card.appendChild(title);
    card.appendChild(kbPaletteStrip(payload.entries));
    cards.appendChild(card);
    heatmapRows.push({ emotion, percent: payload.basic_percent });
    columns = Object.keys(payload.basic_percent);
  }
  container.appendChild(cards);
  container.appendChild(el("h3", "", "basic color distribution"));
  container.appendChild(heatmapTable(heatmapRows, columns));
}

export async function emotionView(
  container: HTMLElement,
  api: ApiClient,
  name: string,
): Promise<void> {
  container.textContent = "";
  try {
    const payload = await api.emotionPalette(name);
    const card = el("div", "palette-card");
    card.appendChild(el("h3", "", `${payload.emotion} (${payload.image_count} images)`));
    card.appendChild(kbPaletteStrip(payload.entries));
    card.appendChild(basicColorBar(payload.basic_percent));
    const table = el("table", "kb-entries");
    for (const entry of payload.entries) {
      const row = el("tr");
      row.appendChild(el("td", "", `${entry.hue}/${entry.saturation}/${entry.intensity}`));
      row.appendChild(el("td", "", String(entry.frequency)));
      row.appendChild(el("td", "", entry.share.toFixed(4)));
      table.appendChild(row);
    }
    card.appendChild(table);
    container.appendChild(card);
  } catch (error) {
    const apiError = error as ApiError;
    if (apiError.status === 404) {
      container.appendChild(el("div", "not-found", `no emotion ${name}`));
    } else {
      container.appendChild(errorBox(describeError(error)));
    }
  }
}
