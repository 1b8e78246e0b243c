// Workflow canvas model: nodes with positions and predecessor edges.
// Edge creation is rejected locally when it would close a cycle, before the
// server ever sees the document.

export interface ActivityNode {
  id: string;
  name: string;
  x: number;
  y: number;
  dependsOn: string[];
}

function byId(nodes: ActivityNode[]): Map<string, ActivityNode> {
  return new Map(nodes.map((n) => [n.id, n]));
}

/** True if making `toId` depend on `fromId` would close a cycle. */
export function wouldCreateCycle(
  nodes: ActivityNode[],
  fromId: string,
  toId: string,
): boolean {
  if (fromId === toId) return true;
  const index = byId(nodes);
  // a cycle appears iff toId is already (transitively) a dependency of fromId
  const stack = [fromId];
  const seen = new Set<string>();
  while (stack.length > 0) {
    const current = stack.pop()!;
    if (current === toId) return true;
    if (seen.has(current)) continue;
    seen.add(current);
    const node = index.get(current);
    if (node) stack.push(...node.dependsOn);
  }
  return false;
}

export type EdgeResult =
  | { ok: true; nodes: ActivityNode[] }
  | { ok: false; reason: string };

/** Add a dependency edge fromId -> toId (toId runs after fromId). */
export function addEdge(
  nodes: ActivityNode[],
  fromId: string,
  toId: string,
): EdgeResult {
  const index = byId(nodes);
  if (!index.has(fromId) || !index.has(toId)) {
    return { ok: false, reason: "both endpoints must exist" };
  }
  if (index.get(toId)!.dependsOn.includes(fromId)) {
    return { ok: false, reason: "edge already exists" };
  }
  if (wouldCreateCycle(nodes, fromId, toId)) {
    return { ok: false, reason: "edge would create a cycle" };
  }
  return {
    ok: true,
    nodes: nodes.map((n) =>
      n.id === toId ? { ...n, dependsOn: [...n.dependsOn, fromId] } : n,
    ),
  };
}

export function removeEdge(
  nodes: ActivityNode[],
  fromId: string,
  toId: string,
): ActivityNode[] {
  return nodes.map((n) =>
    n.id === toId
      ? { ...n, dependsOn: n.dependsOn.filter((d) => d !== fromId) }
      : n,
  );
}

/** Remove a node; edges touching it disappear with it. */
export function removeNode(
  nodes: ActivityNode[],
  id: string,
): ActivityNode[] {
  return nodes
    .filter((n) => n.id !== id)
    .map((n) => ({ ...n, dependsOn: n.dependsOn.filter((d) => d !== id) }));
}

export function moveNode(
  nodes: ActivityNode[],
  id: string,
  x: number,
  y: number,
): ActivityNode[] {
  return nodes.map((n) => (n.id === id ? { ...n, x, y } : n));
}

export function edgeList(
  nodes: ActivityNode[],
): Array<{ from: string; to: string }> {
  const edges: Array<{ from: string; to: string }> = [];
  for (const node of nodes) {
    for (const dep of node.dependsOn) {
      edges.push({ from: dep, to: node.id });
    }
  }
  return edges;
}
