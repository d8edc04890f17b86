// Session view-model: a mirror of the server state plus in-progress
// selection and the move log.  It never mutates game state locally; every
// transition round-trips through the API and replaces the mirror wholesale.

import { GameApi } from './api';
import { composeBound, composeElement, composeSet, emptySelection,
         Selection, toggleNode } from './compose';
import type { MoveRequest, PositionDoc, ReplyDoc, SideName } from './types';

export interface LogEntry {
  spoiler: MoveRequest;
  replies: ReplyDoc[];
}

export type Listener = () => void;

export class ViewModel {
  api: GameApi;
  doc: PositionDoc | null = null;
  selection: Selection = emptySelection();
  log: LogEntry[] = [];
  lastError: string | null = null;
  busy = false;
  stale = false;   // session vanished on the server
  private listeners: Listener[] = [];

  constructor(api: GameApi) {
    this.api = api;
  }

  onChange(fn: Listener): void {
    this.listeners.push(fn);
  }

  private emit(): void {
    for (const fn of this.listeners) fn();
  }

  async newGame(k: number, sizes: number[], multiplicity: number,
                rounds: number): Promise<void> {
    this.doc = await this.api.newGame({ k, sizes, multiplicity, rounds });
    this.selection = emptySelection();
    this.log = [];
    this.lastError = null;
    this.stale = false;
    this.emit();
  }

  async refresh(): Promise<void> {
    if (!this.doc) return;
    try {
      this.doc = await this.api.getGame(this.doc.sessionId);
    } catch (err: any) {
      if (err?.status === 404) this.stale = true;
      else throw err;
    }
    this.emit();
  }

  private async send(move: MoveRequest): Promise<void> {
    if (!this.doc || this.busy) return;
    this.busy = true;
    this.emit();
    try {
      const doc = await this.api.move(this.doc.sessionId, move);
      this.log.push({ spoiler: move, replies: doc.duplicatorReplies ?? [] });
      this.doc = doc;
      this.selection = emptySelection();
      this.lastError = null;
    } catch (err: any) {
      if (err?.status === 404) {
        this.stale = true;
      } else {
        const detail = err?.detail;
        this.lastError = typeof detail === 'object' && detail?.error
          ? String(detail.error) : String(detail ?? err);
      }
    } finally {
      this.busy = false;
      this.emit();
    }
  }

  /** Element move: a plain click on a node. */
  async clickElement(side: SideName, node: string): Promise<void> {
    if (!this.doc) return;
    const move = composeElement(this.doc, side, node);
    if (typeof move === 'string') {
      this.lastError = move;
      this.emit();
      return;
    }
    await this.send(move);
  }

  /** Multi-select toggling for set and bounded-set moves. */
  toggle(side: SideName, node: string): void {
    this.selection = toggleNode(this.selection, side, node);
    this.lastError = null;
    this.emit();
  }

  async confirmSet(): Promise<void> {
    if (!this.doc) return;
    const move = composeSet(this.doc, this.selection);
    if (typeof move === 'string') {
      this.lastError = move;
      this.emit();
      return;
    }
    await this.send(move);
  }

  async playBound(side: SideName, l: number): Promise<void> {
    if (!this.doc) return;
    const move = composeBound(this.doc, side, l);
    if (typeof move === 'string') {
      this.lastError = move;
      this.emit();
      return;
    }
    await this.send(move);
  }
}
