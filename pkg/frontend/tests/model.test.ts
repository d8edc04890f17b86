import { describe, expect, it } from 'vitest';

import { ApiError, GameApi } from '../src/api';
import { ViewModel } from '../src/model';
import type { PositionDoc } from '../src/types';

// A fake transport implementing just enough of the wire contract: one
// session, element moves answered by mirroring onto the other side's final
// node, state returned wholesale like the real server.

function baseDoc(): PositionDoc {
  return {
    v: 1,
    sessionId: 'abc',
    roundsLeft: 1,
    toAct: 'spoiler',
    phase: { kind: 'spoiler' },
    families: {
      E: {
        components: [{
          id: 'W0', leftChain: 1, rightChain: 2,
          named: { l: 'W0_l', r: 'W0_r', a1: 'W0_a1', a2: 'W0_a2',
                   b1: 'W0_b1', b2: 'W0_b2', b3: 'W0_b3' },
          leftChainNodes: ['W0_La1_1'],
          rightChainNodes: ['W0_La2_1', 'W0_La2_2'],
        }],
        finalNode: 'd',
      },
      U: { components: [], finalNode: 'd' },
    },
    elements: [],
    sets: [],
    config: { k: 1, sizes: [1, 2], multiplicity: 1, rounds: 1 },
  };
}

function fakeServer() {
  let doc = baseDoc();
  let deleted = false;
  const fetchImpl = async (url: string, init?: RequestInit): Promise<Response> => {
    const body = init?.body ? JSON.parse(init.body as string) : null;
    const respond = (status: number, payload: unknown) =>
      new Response(JSON.stringify(payload), { status });
    if (url.endsWith('/games') && init?.method === 'POST') {
      doc = baseDoc();
      deleted = false;
      return respond(200, doc);
    }
    if (url.includes('/games/abc/moves')) {
      if (deleted) return respond(404, { detail: 'unknown session' });
      if (body.type === 'element') {
        if (body.node === 'missing') {
          return respond(409, { detail: { error: 'unknown node' } });
        }
        doc = {
          ...doc,
          roundsLeft: doc.roundsLeft - 1,
          elements: [...doc.elements, {
            round: doc.elements.length + 1,
            E: body.side === 'E' ? body.node : 'd',
            U: body.side === 'U' ? body.node : 'd',
          }],
          verdict: { set_membership: true, equalities: true,
                     relations: true, duplicator_wins: true },
          duplicatorReplies: [{ kind: 'dup_element', E: 'd', U: 'd' }],
        };
        return respond(200, doc);
      }
      return respond(409, { detail: { error: 'unsupported in fake' } });
    }
    if (url.includes('/games/abc')) {
      if (deleted) return respond(404, { detail: 'unknown session' });
      if (init?.method === 'DELETE') {
        deleted = true;
        return respond(200, { deleted: 'abc' });
      }
      const { duplicatorReplies, ...rest } = doc as PositionDoc & {
        duplicatorReplies?: unknown };
      return respond(200, rest);
    }
    return respond(404, { detail: 'no such route' });
  };
  return { fetchImpl, kill: () => { deleted = true; } };
}

describe('view model', () => {
  it('mirrors server state and never drifts', async () => {
    const fake = fakeServer();
    const vm = new ViewModel(new GameApi('http://fake', fake.fetchImpl));
    await vm.newGame(1, [1, 2], 1, 1);
    expect(vm.doc?.sessionId).toBe('abc');
    await vm.clickElement('E', 'W0_l');
    expect(vm.doc?.elements).toHaveLength(1);
    expect(vm.log).toHaveLength(1);
    expect(vm.log[0].replies[0].kind).toBe('dup_element');
    // state equals a fresh GET (modulo the transient replies field)
    const got = await vm.api.getGame('abc');
    const mirror = { ...vm.doc } as Record<string, unknown>;
    delete mirror.duplicatorReplies;
    expect(mirror).toEqual(got);
  });

  it('surfaces 409 details without mutating state', async () => {
    const fake = fakeServer();
    const vm = new ViewModel(new GameApi('http://fake', fake.fetchImpl));
    await vm.newGame(1, [1, 2], 1, 1);
    const before = vm.doc;
    await vm.clickElement('E', 'missing');
    expect(vm.lastError).toContain('unknown node');
    expect(vm.doc).toBe(before);
  });

  it('flags a vanished session as stale', async () => {
    const fake = fakeServer();
    const vm = new ViewModel(new GameApi('http://fake', fake.fetchImpl));
    await vm.newGame(1, [1, 2], 1, 1);
    fake.kill();
    await vm.refresh();
    expect(vm.stale).toBe(true);
  });

  it('client-side blocks never reach the transport', async () => {
    let calls = 0;
    const fetchImpl = async (): Promise<Response> => {
      calls += 1;
      return new Response(JSON.stringify(baseDoc()), { status: 200 });
    };
    const vm = new ViewModel(new GameApi('http://fake', fetchImpl));
    await vm.newGame(1, [1, 2], 1, 1);
    const after = calls;
    await vm.confirmSet();          // nothing selected: blocked locally
    expect(calls).toBe(after);
    expect(vm.lastError).not.toBeNull();
  });

  it('api errors carry status and detail', async () => {
    const fetchImpl = async (): Promise<Response> =>
      new Response(JSON.stringify({ detail: 'nope' }), { status: 404 });
    const api = new GameApi('http://fake', fetchImpl);
    await expect(api.getGame('zzz')).rejects.toSatisfy((e: unknown) =>
      e instanceof ApiError && e.status === 404 && e.detail === 'nope');
  });
});
