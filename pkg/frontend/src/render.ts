// DOM rendering: the E family on the left, the U family on the right, one
// glyph per gadget with the seven named nodes laid out as a W and the
// chains collapsed to length badges that expand for in-chain selection.
// Picked elements carry their round number on both sides; sets shade their
// members per index; the verdict panel lists the three winning clauses.

import { ViewModel } from './model';
import { awaitingBoundedSet, gameOver, humanToAct } from './compose';
import type { ComponentDoc, PositionDoc, SideName } from './types';

export type Mode = 'element' | 'select';

export interface UiState {
  mode: Mode;
  expandedChains: Set<string>;   // `${side}:${compId}:${which}`
}

export function initialUiState(): UiState {
  return { mode: 'element', expandedChains: new Set() };
}

const NAMED_ORDER = ['l', 'b1', 'a1', 'b2', 'a2', 'b3', 'r'];

function el(tag: string, cls?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

function roundBadges(doc: PositionDoc, side: SideName, label: string): string {
  const rounds = doc.elements
    .filter((e) => e[side] === label)
    .map((e) => e.round);
  return rounds.length ? `#${rounds.join(',#')}` : '';
}

function setClasses(doc: PositionDoc, side: SideName, label: string): string {
  const hits = doc.sets
    .filter((s) => s[side].includes(label))
    .map((s) => `in-set-${((s.index - 1) % 4) + 1}`);
  return hits.join(' ');
}

function nodeButton(vm: ViewModel, ui: UiState, side: SideName,
                    label: string, text: string): HTMLElement {
  const doc = vm.doc!;
  const btn = el('button', 'node', text) as HTMLButtonElement;
  btn.dataset.side = side;
  btn.dataset.node = label;
  const marks = roundBadges(doc, side, label);
  if (marks) {
    btn.append(el('sup', 'round-mark', marks));
    btn.classList.add('picked');
  }
  const shade = setClasses(doc, side, label);
  if (shade) btn.className += ` ${shade}`;
  if (vm.selection.nodes.has(label) && vm.selection.side === side) {
    btn.classList.add('selected');
  }
  btn.addEventListener('click', () => {
    if (ui.mode === 'element' && !awaitingBoundedSet(doc.phase)) {
      void vm.clickElement(side, label);
    } else {
      vm.toggle(side, label);
    }
  });
  return btn;
}

function chainBlock(vm: ViewModel, ui: UiState, side: SideName,
                    comp: ComponentDoc, which: 'left' | 'right'): HTMLElement {
  const nodes = which === 'left' ? comp.leftChainNodes : comp.rightChainNodes;
  const key = `${side}:${comp.id}:${which}`;
  const wrap = el('span', 'chain');
  const badge = el('button', 'chain-badge',
                   `${which === 'left' ? 'L' : 'R'}×${nodes.length}`);
  badge.title = 'expand the chain for selection';
  badge.addEventListener('click', () => {
    if (ui.expandedChains.has(key)) ui.expandedChains.delete(key);
    else ui.expandedChains.add(key);
    rerender(vm, ui);
  });
  wrap.append(badge);
  const doc = vm.doc!;
  const touched = nodes.some(
    (n) => roundBadges(doc, side, n) || setClasses(doc, side, n)
      || (vm.selection.side === side && vm.selection.nodes.has(n)));
  if (ui.expandedChains.has(key) || touched) {
    const strip = el('span', 'chain-strip');
    for (const n of nodes) {
      strip.append(nodeButton(vm, ui, side, n, n.split('_').pop() ?? n));
    }
    wrap.append(strip);
  }
  return wrap;
}

function glyph(vm: ViewModel, ui: UiState, side: SideName,
               comp: ComponentDoc): HTMLElement {
  const card = el('div', 'gadget');
  card.append(el('div', 'gadget-title',
                 `${comp.id} (${comp.leftChain},${comp.rightChain})`));
  const row = el('div', 'named-row');
  for (const name of NAMED_ORDER) {
    row.append(nodeButton(vm, ui, side, comp.named[name], name));
  }
  card.append(row);
  const chains = el('div', 'chains-row');
  chains.append(chainBlock(vm, ui, side, comp, 'left'));
  chains.append(chainBlock(vm, ui, side, comp, 'right'));
  card.append(chains);
  return card;
}

function familyColumn(vm: ViewModel, ui: UiState, side: SideName): HTMLElement {
  const doc = vm.doc!;
  const fam = doc.families[side];
  const col = el('div', 'family');
  col.append(el('h2', undefined, side === 'E' ? 'E family' : 'U family'));
  for (const comp of fam.components) {
    col.append(glyph(vm, ui, side, comp));
  }
  const final = el('div', 'final-node');
  final.append(el('span', undefined, 'final node: '));
  final.append(nodeButton(vm, ui, side, fam.finalNode, fam.finalNode));
  col.append(final);
  return col;
}

function verdictPanel(doc: PositionDoc): HTMLElement {
  const panel = el('div', 'verdict');
  panel.append(el('h2', undefined, 'verdict'));
  const v = doc.verdict!;
  const rows: [string, boolean][] = [
    ['elements respect set membership', v.set_membership],
    ['equalities agree', v.equalities],
    ['relations agree', v.relations],
  ];
  for (const [text, ok] of rows) {
    panel.append(el('div', ok ? 'clause pass' : 'clause fail',
                    `${ok ? 'PASS' : 'FAIL'} — ${text}`));
  }
  panel.append(el('div',
                  v.duplicator_wins ? 'outcome dup' : 'outcome spoiler',
                  v.duplicator_wins ? 'duplicator wins' : 'spoiler wins'));
  return panel;
}

function controls(vm: ViewModel, ui: UiState): HTMLElement {
  const doc = vm.doc!;
  const bar = el('div', 'controls');
  bar.append(el('span', 'status',
                gameOver(doc) ? 'game over'
                : `${doc.roundsLeft} round(s) left — `
                  + (humanToAct(doc) ? 'your move' : 'engine thinking')));

  if (awaitingBoundedSet(doc.phase)) {
    const { side, m, l } = doc.phase;
    bar.append(el('span', 'bound-hint',
                  `bound in flight: you asked ${side} with l=${l}; the engine `
                  + `answered m=${m}; select at least ${m} nodes in ${side}`));
  } else {
    const modeBtn = el('button', 'mode-toggle',
                       ui.mode === 'element' ? 'mode: element (click to '
                       + 'switch to set selection)' : 'mode: set selection');
    modeBtn.id = 'mode-toggle';
    modeBtn.addEventListener('click', () => {
      ui.mode = ui.mode === 'element' ? 'select' : 'element';
      rerender(vm, ui);
    });
    bar.append(modeBtn);
  }

  const confirm = el(
    'button', 'confirm-set',
    `confirm set (${vm.selection.nodes.size} selected)`) as HTMLButtonElement;
  confirm.id = 'confirm-set';
  const needed = awaitingBoundedSet(doc.phase) ? (doc.phase.m ?? 0) : 0;
  confirm.disabled = !humanToAct(doc)
    || (awaitingBoundedSet(doc.phase)
        ? vm.selection.nodes.size < needed
          || (vm.selection.side !== null && vm.selection.side !== doc.phase.side)
        : vm.selection.side === null);
  confirm.addEventListener('click', () => { void vm.confirmSet(); });
  bar.append(confirm);

  if (!awaitingBoundedSet(doc.phase) && humanToAct(doc)) {
    const side = el('select') as HTMLSelectElement;
    side.id = 'bound-side';
    for (const s of ['E', 'U']) {
      const opt = document.createElement('option');
      opt.value = s;
      opt.textContent = s;
      side.append(opt);
    }
    const lInput = el('input') as HTMLInputElement;
    lInput.id = 'bound-l';
    lInput.type = 'number';
    lInput.min = '0';
    lInput.value = '1';
    const boundBtn = el('button', undefined, 'bound move') as HTMLButtonElement;
    boundBtn.id = 'bound-go';
    boundBtn.addEventListener('click', () => {
      void vm.playBound(side.value as SideName, Number(lInput.value));
    });
    bar.append(el('span', undefined, ' bound: '), side, lInput, boundBtn);
  }
  return bar;
}

function moveLog(vm: ViewModel): HTMLElement {
  const panel = el('div', 'log');
  panel.append(el('h2', undefined, 'moves'));
  vm.log.forEach((entry, i) => {
    const line = el('div', 'log-entry');
    line.textContent = `${i + 1}. you: ${JSON.stringify(entry.spoiler)} — `
      + `engine: ${entry.replies.map((r) => r.kind).join(', ')}`;
    panel.append(line);
  });
  return panel;
}

export function rerender(vm: ViewModel, ui: UiState,
                         root?: HTMLElement): void {
  const host = root ?? document.getElementById('app');
  if (!host) return;
  host.textContent = '';
  if (vm.stale) {
    host.append(el('div', 'banner stale',
                   'this session no longer exists on the server'));
    return;
  }
  if (!vm.doc) {
    host.append(el('div', 'banner', 'no game yet'));
    return;
  }
  if (vm.lastError) {
    host.append(el('div', 'banner error', vm.lastError));
  }
  host.append(controls(vm, ui));
  const board = el('div', 'board');
  board.append(familyColumn(vm, ui, 'E'));
  board.append(familyColumn(vm, ui, 'U'));
  host.append(board);
  if (gameOver(vm.doc) && vm.doc.verdict) {
    host.append(verdictPanel(vm.doc));
  }
  host.append(moveLog(vm));
}
