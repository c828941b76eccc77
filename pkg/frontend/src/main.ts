/** Browser entry point: wires the API client and view models to the DOM.
 *
 * The page has four panels — sign-in, taxonomy list, heatmap, circles — plus
 * a conflict dialog that appears when another tab saved first. All rendering
 * is plain DOM so the studio ships as one module with no framework.
 */

import { ApiClient, ApiError } from "./api";
import { buildCircleScene } from "./circlesView";
import { TaxonomyEditor } from "./editorState";
import { heatmapToPng } from "./exportPng";
import { HeatmapModel, intensityScale } from "./heatmap";
import { ReviewBoardModel } from "./reviewBoard";

const api = new ApiClient("/api/v1");
const board = new ReviewBoardModel(api);

let editor: TaxonomyEditor | null = null;
let heatmap: HeatmapModel | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function setStatus(text: string): void {
  el<HTMLElement>("status").textContent = text;
}

async function refreshTaxonomies(): Promise<void> {
  const list = el<HTMLUListElement>("taxonomy-list");
  list.replaceChildren();
  for (const summary of await api.listTaxonomies()) {
    const item = document.createElement("li");
    const open = document.createElement("button");
    open.textContent = `${summary.name} (v${summary.version}, ${summary.concept_count} concepts)`;
    open.addEventListener("click", () => void openTaxonomy(summary.id));
    item.append(open);
    list.append(item);
  }
}

async function openTaxonomy(id: string): Promise<void> {
  editor = new TaxonomyEditor(api, id);
  editor.onChange(renderConflict);
  await editor.load();
  await refreshHeatmap();
  await refreshCircles();
  setStatus(`opened ${editor.detail?.name ?? id} at v${editor.knownVersion}`);
}

async function refreshHeatmap(): Promise<void> {
  if (!editor) return;
  const { payload } = await api.matrixView(editor.taxonomyId);
  heatmap = new HeatmapModel(payload);
  renderHeatmap();
}

function renderHeatmap(): void {
  if (!heatmap) return;
  const table = el<HTMLTableElement>("heatmap");
  table.replaceChildren();
  const visible = heatmap.visible();
  const scale = intensityScale(visible);
  const header = document.createElement("tr");
  header.append(document.createElement("th"));
  visible.names.forEach((name) => {
    const th = document.createElement("th");
    th.textContent = name;
    header.append(th);
  });
  table.append(header);
  visible.ids.forEach((rowId, i) => {
    const tr = document.createElement("tr");
    const label = document.createElement("th");
    const indent = " ".repeat(2 * (visible.depths[i] ?? 0));
    const marker = heatmap!.hasChildren(rowId) ? (visible.collapsed[i] ? "▸ " : "▾ ") : "";
    label.textContent = `${indent}${marker}${visible.names[i] ?? rowId}`;
    label.style.cursor = heatmap!.hasChildren(rowId) ? "pointer" : "default";
    label.addEventListener("click", () => {
      heatmap!.toggle(rowId);
      renderHeatmap();
    });
    tr.append(label);
    visible.cells[i]?.forEach((value, j) => {
      const td = document.createElement("td");
      td.textContent = String(value);
      const t = i === j ? 1 : scale(value);
      td.style.background = `rgba(184, 15, 51, ${(0.85 * t).toFixed(3)})`;
      tr.append(td);
    });
    table.append(tr);
  });
}

async function refreshCircles(): Promise<void> {
  if (!editor) return;
  const { payload } = await api.circlesView(editor.taxonomyId);
  const svg = el<HTMLElement>("circles");
  const scene = buildCircleScene(payload, 480, 480);
  const ns = "http://www.w3.org/2000/svg";
  svg.replaceChildren();
  for (const circle of scene.circles) {
    const node = document.createElementNS(ns, "circle");
    node.setAttribute("cx", circle.cx.toFixed(2));
    node.setAttribute("cy", circle.cy.toFixed(2));
    node.setAttribute("r", Math.max(circle.r, 0.5).toFixed(2));
    node.setAttribute("fill", circle.color);
    node.setAttribute("fill-opacity", "0.85");
    node.setAttribute("stroke", "#10212f");
    const title = document.createElementNS(ns, "title");
    title.textContent = circle.name;
    node.append(title);
    svg.append(node);
  }
}

function renderConflict(): void {
  if (!editor) return;
  const dialog = el<HTMLElement>("conflict");
  if (editor.phase === "conflict" && editor.prompt) {
    const { label, expectedVersion, currentVersion } = editor.prompt;
    el<HTMLElement>("conflict-text").textContent =
      `"${label}" was based on v${expectedVersion}, but the taxonomy is now at ` +
      `v${currentVersion} (someone else saved first).`;
    dialog.hidden = false;
  } else {
    dialog.hidden = true;
  }
}

function wireUp(): void {
  el<HTMLFormElement>("login-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const username = el<HTMLInputElement>("username").value;
    const password = el<HTMLInputElement>("password").value;
    void api
      .login(username, password)
      .then(async (session) => {
        setStatus(`signed in as ${session.username}`);
        await refreshTaxonomies();
        await board.refresh();
      })
      .catch((error: unknown) => {
        setStatus(error instanceof ApiError ? error.message : String(error));
      });
  });

  el<HTMLButtonElement>("add-concept").addEventListener("click", () => {
    if (!editor?.detail) return;
    const name = el<HTMLInputElement>("concept-name").value.trim();
    const dimension = editor.detail.dimensions[0];
    if (!name || !dimension) return;
    const id = editor.taxonomyId;
    void editor
      .save(`add concept "${name}"`, (ifMatch) =>
        api.addConcept(id, dimension.id, name, { ifMatch }),
      )
      .then(async () => {
        await refreshHeatmap();
        await refreshCircles();
      })
      .catch((error: unknown) => setStatus(String(error)));
  });

  el<HTMLButtonElement>("conflict-retry").addEventListener("click", () => {
    void editor?.retryOnLatest().then(refreshHeatmap);
  });
  el<HTMLButtonElement>("conflict-discard").addEventListener("click", () => {
    void editor?.discardPending().then(refreshHeatmap);
  });

  el<HTMLButtonElement>("export-heatmap").addEventListener("click", () => {
    if (!heatmap) return;
    const png = heatmapToPng(heatmap, { cellSize: 18 });
    const blob = new Blob([png.slice().buffer], { type: "image/png" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "heatmap.png";
    link.click();
    URL.revokeObjectURL(link.href);
  });
}

document.addEventListener("DOMContentLoaded", wireUp);
