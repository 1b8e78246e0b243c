// SVG workflow canvas: drag nodes, draw dependency edges, delete nodes.
// Edge creation is two clicks: arm a source with its ▶ handle, then click
// the target node. Cycle-closing edges are rejected by the caller.

import type { ActivityNode } from "./graph.js";
import { edgeList } from "./graph.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const NODE_W = 160;
const NODE_H = 56;

export interface CanvasHandlers {
  onMove(id: string, x: number, y: number): void;
  onConnect(fromId: string, toId: string): void;
  onDelete(id: string): void;
}

interface DragState {
  id: string;
  offsetX: number;
  offsetY: number;
}

let armedSource: string | null = null;

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
): SVGElementTagNameMap[K] {
  return document.createElementNS(SVG_NS, tag);
}

function center(node: ActivityNode): { cx: number; cy: number } {
  return { cx: node.x + NODE_W / 2, cy: node.y + NODE_H / 2 };
}

export function renderCanvas(
  container: HTMLElement,
  nodes: ActivityNode[],
  handlers: CanvasHandlers,
): void {
  container.replaceChildren();
  const svg = svgEl("svg");
  svg.setAttribute("class", "workflow-canvas");
  const width = Math.max(760, ...nodes.map((n) => n.x + NODE_W + 40));
  const height = Math.max(420, ...nodes.map((n) => n.y + NODE_H + 40));
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));

  const defs = svgEl("defs");
  const marker = svgEl("marker");
  marker.setAttribute("id", "arrow");
  marker.setAttribute("viewBox", "0 0 10 10");
  marker.setAttribute("refX", "9");
  marker.setAttribute("refY", "5");
  marker.setAttribute("markerWidth", "7");
  marker.setAttribute("markerHeight", "7");
  marker.setAttribute("orient", "auto-start-reverse");
  const arrow = svgEl("path");
  arrow.setAttribute("d", "M 0 0 L 10 5 L 0 10 z");
  arrow.setAttribute("class", "edge-arrow");
  marker.appendChild(arrow);
  defs.appendChild(marker);
  svg.appendChild(defs);

  const index = new Map(nodes.map((n) => [n.id, n]));
  for (const edge of edgeList(nodes)) {
    const from = index.get(edge.from);
    const to = index.get(edge.to);
    if (!from || !to) continue;
    const a = center(from);
    const b = center(to);
    const line = svgEl("line");
    line.setAttribute("x1", String(a.cx));
    line.setAttribute("y1", String(a.cy));
    line.setAttribute("x2", String(b.cx));
    line.setAttribute("y2", String(b.cy));
    line.setAttribute("class", "edge");
    line.setAttribute("marker-end", "url(#arrow)");
    svg.appendChild(line);
  }

  let drag: DragState | null = null;

  for (const node of nodes) {
    const group = svgEl("g");
    group.setAttribute("transform", `translate(${node.x}, ${node.y})`);
    group.setAttribute("class",
                       armedSource === node.id ? "node armed" : "node");

    const rect = svgEl("rect");
    rect.setAttribute("width", String(NODE_W));
    rect.setAttribute("height", String(NODE_H));
    rect.setAttribute("rx", "8");
    group.appendChild(rect);

    const label = svgEl("text");
    label.setAttribute("x", String(NODE_W / 2));
    label.setAttribute("y", "24");
    label.setAttribute("text-anchor", "middle");
    label.textContent = node.id.length > 22
      ? `${node.id.slice(0, 21)}…` : node.id;
    group.appendChild(label);

    if (node.name !== node.id) {
      const sub = svgEl("text");
      sub.setAttribute("x", String(NODE_W / 2));
      sub.setAttribute("y", "42");
      sub.setAttribute("text-anchor", "middle");
      sub.setAttribute("class", "node-subtitle");
      sub.textContent = node.name.length > 26
        ? `${node.name.slice(0, 25)}…` : node.name;
      group.appendChild(sub);
    }

    const connectHandle = svgEl("text");
    connectHandle.setAttribute("x", String(NODE_W - 14));
    connectHandle.setAttribute("y", "16");
    connectHandle.setAttribute("class", "node-action connect");
    connectHandle.textContent = "▶";
    const handleTitle = svgEl("title");
    handleTitle.textContent = "start an edge from this activity";
    connectHandle.appendChild(handleTitle);
    connectHandle.addEventListener("click", (event) => {
      event.stopPropagation();
      armedSource = armedSource === node.id ? null : node.id;
      renderCanvas(container, nodes, handlers);
    });
    group.appendChild(connectHandle);

    const deleteHandle = svgEl("text");
    deleteHandle.setAttribute("x", "8");
    deleteHandle.setAttribute("y", "16");
    deleteHandle.setAttribute("class", "node-action delete");
    deleteHandle.textContent = "×";
    deleteHandle.addEventListener("click", (event) => {
      event.stopPropagation();
      if (armedSource === node.id) armedSource = null;
      handlers.onDelete(node.id);
    });
    group.appendChild(deleteHandle);

    group.addEventListener("click", () => {
      if (armedSource && armedSource !== node.id) {
        const source = armedSource;
        armedSource = null;
        handlers.onConnect(source, node.id);
      }
    });

    group.addEventListener("pointerdown", (event) => {
      if (armedSource) return; // connecting, not dragging
      drag = {
        id: node.id,
        offsetX: event.offsetX - node.x,
        offsetY: event.offsetY - node.y,
      };
    });

    svg.appendChild(group);
  }

  svg.addEventListener("pointermove", (event) => {
    if (!drag) return;
    const x = Math.max(0, event.offsetX - drag.offsetX);
    const y = Math.max(0, event.offsetY - drag.offsetY);
    handlers.onMove(drag.id, x, y);
  });
  svg.addEventListener("pointerup", () => {
    drag = null;
  });
  svg.addEventListener("pointerleave", () => {
    drag = null;
  });

  container.appendChild(svg);
}

export function disarm(): void {
  armedSource = null;
}
