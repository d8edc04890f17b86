// Move composition: legality hints enforced client-side before a request is
// sent; the server remains authoritative and re-checks everything.

import type { MoveRequest, PhaseDoc, PositionDoc, SideName } from './types';

export interface Selection {
  side: SideName | null;
  nodes: Set<string>;
}

export function emptySelection(): Selection {
  return { side: null, nodes: new Set() };
}

export function toggleNode(sel: Selection, side: SideName, node: string): Selection {
  const next: Selection = { side: sel.side, nodes: new Set(sel.nodes) };
  if (next.side !== null && next.side !== side) {
    // a set lives in one structure; switching sides restarts the selection
    next.nodes.clear();
  }
  next.side = side;
  if (next.nodes.has(node)) {
    next.nodes.delete(node);
    if (next.nodes.size === 0) next.side = null;
  } else {
    next.nodes.add(node);
  }
  return next;
}

export function gameOver(doc: PositionDoc): boolean {
  return doc.roundsLeft === 0 && doc.phase.kind === 'spoiler';
}

export function humanToAct(doc: PositionDoc): boolean {
  return !gameOver(doc) && doc.toAct === 'spoiler';
}

export function awaitingBoundedSet(phase: PhaseDoc): boolean {
  return phase.kind === 'bounded_set';
}

/** Why the composition cannot be sent, or null when it is well-formed. */
export function setMoveProblem(doc: PositionDoc, sel: Selection): string | null {
  if (!humanToAct(doc)) return 'not your turn';
  if (awaitingBoundedSet(doc.phase)) {
    const { side, m } = doc.phase;
    if (sel.nodes.size > 0 && sel.side !== side) {
      return `the bounded set must come from the ${side} family`;
    }
    if (sel.nodes.size < (m ?? 0)) {
      return `need at least ${m} nodes, have ${sel.nodes.size}`;
    }
    return null;
  }
  if (sel.side === null && sel.nodes.size > 0) return 'pick a side first';
  return null;
}

export function composeElement(doc: PositionDoc, side: SideName,
                               node: string): MoveRequest | string {
  if (!humanToAct(doc)) return 'not your turn';
  if (awaitingBoundedSet(doc.phase)) {
    return 'a bound move is in flight; confirm its set instead';
  }
  return { type: 'element', side, node };
}

export function composeSet(doc: PositionDoc, sel: Selection): MoveRequest | string {
  const problem = setMoveProblem(doc, sel);
  if (problem !== null) return problem;
  const nodes = [...sel.nodes].sort();
  if (awaitingBoundedSet(doc.phase)) {
    return { type: 'bounded-set', nodes };
  }
  if (sel.side === null) return 'select at least a side';
  return { type: 'set', side: sel.side, nodes };
}

export function composeBound(doc: PositionDoc, side: SideName,
                             l: number): MoveRequest | string {
  if (!humanToAct(doc)) return 'not your turn';
  if (awaitingBoundedSet(doc.phase)) return 'finish the pending bound move';
  if (!Number.isInteger(l) || l < 0) return 'l must be a natural number';
  return { type: 'bound', side, l };
}
