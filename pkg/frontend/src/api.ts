// Thin typed client for the game server; every call returns the parsed
// JSON body or throws ApiError with the server's detail payload.

import type {
  ChainsDoc, MoveRequest, NewGameRequest, PositionDoc,
} from './types';

export class ApiError extends Error {
  status: number;
  detail: unknown;

  constructor(status: number, detail: unknown) {
    super(`server responded ${status}`);
    this.status = status;
    this.detail = detail;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class GameApi {
  baseUrl: string;
  private fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, '');
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { 'Content-Type': 'application/json' };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    const text = await resp.text();
    const doc = text ? JSON.parse(text) : null;
    if (!resp.ok) {
      throw new ApiError(resp.status, doc?.detail ?? doc);
    }
    return doc as T;
  }

  chains(k: number, maxlen: number): Promise<ChainsDoc> {
    return this.request('GET', `/chains?k=${k}&maxlen=${maxlen}&attached=true`);
  }

  newGame(req: NewGameRequest): Promise<PositionDoc> {
    return this.request('POST', '/games', req);
  }

  getGame(sessionId: string): Promise<PositionDoc> {
    return this.request('GET', `/games/${sessionId}`);
  }

  deleteGame(sessionId: string): Promise<unknown> {
    return this.request('DELETE', `/games/${sessionId}`);
  }

  move(sessionId: string, move: MoveRequest): Promise<PositionDoc> {
    return this.request('POST', `/games/${sessionId}/moves`, move);
  }
}
