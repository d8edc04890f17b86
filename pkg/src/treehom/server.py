"""Session-holding HTTP JSON API: a human plays spoiler against the engine.

The engine is always duplicator (only duplicator's strategy exists for the
family game; the exhaustive spoiler lives in the small-instance solver and
is not exposed here).  Sessions are in-memory with idle expiry; every wire
document carries a schema version field "v"; node references use the stable
generator labels.  After every server-mediated round the locally-winning
invariant is asserted; a breach is a bug surface and returns a 500-class
fault with diagnostics.
"""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .efgame import (LEFT, RIGHT, Bound, BoundedSet, Element, GamePosition,
                     Move, SetMove, apply_move, check_legal,
                     duplicator_wins_final, final_breakdown,
                     find_equivalent_chain_lengths)
from .errors import (IllegalMove, InsufficientFreshComponents,
                     NotLocallyWinning, SizeLimitExceeded)
from .strategy import (FamilyGameContext, build_context, duplicator_strategy,
                       empty_pairing, initial_game, locally_winning_check)
from .structures import iter_bits
from .tripleu import FamilyConfig, gen_family

WIRE_VERSION = 1
MAX_RANK = 3
MAX_MULTIPLICITY = 4
SESSION_IDLE_SECONDS = 30 * 60


class NewGameRequest(BaseModel):
    k: int
    sizes: list[int]
    multiplicity: int = 2
    rounds: int | None = None


class MoveRequest(BaseModel):
    type: str                 # element | set | bound | bounded-set
    side: str | None = None   # "E" | "U"
    node: str | None = None
    nodes: list[str] | None = None
    l: int | None = None


@dataclass
class Session:
    id: str
    ctx: FamilyGameContext
    position: GamePosition
    pairing: dict[int, int]
    config: dict
    history: list[dict] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_access: float = field(default_factory=time.time)


SIDE_NAMES = {LEFT: "E", RIGHT: "U"}
SIDE_BY_NAME = {"E": LEFT, "U": RIGHT}


def _render_components(ctx: FamilyGameContext, side: str) -> list[dict]:
    fam = ctx.fam(side)
    out = []
    for view in (ctx.e_comps if side == LEFT else ctx.u_comps):
        c = view.comp
        out.append({
            "id": c.prefix.rstrip("_"),
            "leftChain": c.spec.n,
            "rightChain": c.spec.m,
            "named": dict(c.named),
            "leftChainNodes": list(c.left_chain),
            "rightChainNodes": list(c.right_chain),
        })
    return out


def _render_position(sess: Session) -> dict:
    ctx, p = sess.ctx, sess.position
    elems = []
    for j, (le, ru) in enumerate(zip(p.left_elems, p.right_elems)):
        elems.append({"round": j + 1,
                      "E": ctx.efam.structure.labels[le],
                      "U": ctx.ufam.structure.labels[ru]})
    sets = []
    for j, (lm, rm) in enumerate(zip(p.left_sets, p.right_sets)):
        sets.append({"index": j + 1,
                     "E": list(ctx.efam.structure.labels_of(lm)),
                     "U": list(ctx.ufam.structure.labels_of(rm))})
    phase = p.phase
    pending: dict = {"kind": phase[0]}
    if phase[0] == "bounded_set":
        pending = {"kind": "bounded_set", "side": SIDE_NAMES[phase[1]],
                   "l": phase[2], "m": phase[3]}
    doc = {
        "v": WIRE_VERSION,
        "sessionId": sess.id,
        "roundsLeft": p.rounds_left,
        "toAct": p.actor,
        "phase": pending,
        "families": {
            "E": {"components": _render_components(ctx, LEFT),
                  "finalNode": ctx.efam.final_label},
            "U": {"components": _render_components(ctx, RIGHT),
                  "finalNode": ctx.ufam.final_label},
        },
        "elements": elems,
        "sets": sets,
        "config": sess.config,
    }
    if p.rounds_left == 0 and p.phase[0] == "spoiler":
        doc["verdict"] = final_breakdown(p)
    return doc


def _parse_move(sess: Session, req: MoveRequest) -> Move:
    ctx, p = sess.ctx, sess.position
    if req.type == "element":
        side = SIDE_BY_NAME.get(req.side or "")
        if side is None or req.node is None:
            raise IllegalMove("element move needs side ('E'|'U') and node")
        s = ctx.fam(side).structure
        if not s.has_label(req.node):
            raise IllegalMove(f"unknown node {req.node!r}")
        return Element(side, s.index_of(req.node))
    if req.type == "set":
        side = SIDE_BY_NAME.get(req.side or "")
        if side is None or req.nodes is None:
            raise IllegalMove("set move needs side ('E'|'U') and nodes")
        s = ctx.fam(side).structure
        mask = 0
        for lab in req.nodes:
            if not s.has_label(lab):
                raise IllegalMove(f"unknown node {lab!r}")
            mask |= 1 << s.index_of(lab)
        return SetMove(side, mask)
    if req.type == "bound":
        side = SIDE_BY_NAME.get(req.side or "")
        if side is None or req.l is None or req.l < 0:
            raise IllegalMove("bound move needs side ('E'|'U') and l >= 0")
        return Bound(side, req.l)
    if req.type == "bounded-set":
        if p.phase[0] != "bounded_set":
            raise IllegalMove("no bound move awaiting its set")
        side = p.phase[1]
        s = ctx.fam(side).structure
        if req.nodes is None:
            raise IllegalMove("bounded-set move needs nodes")
        mask = 0
        for lab in req.nodes:
            if not s.has_label(lab):
                raise IllegalMove(f"unknown node {lab!r}")
            mask |= 1 << s.index_of(lab)
        return BoundedSet(mask)
    raise IllegalMove(f"unknown move type {req.type!r}")


def _legal_hints(sess: Session) -> dict:
    p = sess.position
    tag = p.phase[0]
    if tag == "spoiler":
        return {"moveTypes": ["element", "set", "bound"],
                "note": "element: pick any node; set: any node list; "
                        "bound: side plus l"}
    if tag == "bounded_set":
        side = SIDE_NAMES[p.phase[1]]
        return {"moveTypes": ["bounded-set"], "side": side,
                "minSize": p.phase[3]}
    return {"moveTypes": [], "note": "engine to move"}


def create_app() -> FastAPI:
    app = FastAPI(title="treehom game server")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    sessions: dict[str, Session] = {}
    chains_cache: dict[tuple[int, int, bool], list[int]] = {}

    def _expire() -> None:
        now = time.time()
        for sid in [sid for sid, s in sessions.items()
                    if now - s.last_access > SESSION_IDLE_SECONDS]:
            sessions.pop(sid, None)

    def _get(sid: str) -> Session:
        _expire()
        sess = sessions.get(sid)
        if sess is None:
            raise HTTPException(404, detail="unknown session")
        sess.last_access = time.time()
        return sess

    def _chains(k: int, maxlen: int, attached: bool) -> list[int]:
        key = (k, maxlen, attached)
        if key not in chains_cache:
            chains_cache[key] = find_equivalent_chain_lengths(
                k, maxlen, attached=attached)
        return chains_cache[key]

    @app.get("/chains")
    def chains(k: int, maxlen: int, attached: bool = True):
        if k > MAX_RANK:
            raise HTTPException(400, detail=f"k must be <= {MAX_RANK}")
        try:
            lengths = _chains(k, maxlen, attached)
        except SizeLimitExceeded as exc:
            raise HTTPException(400, detail=str(exc))
        return {"v": WIRE_VERSION, "k": k, "maxlen": maxlen,
                "attached": attached, "lengths": lengths}

    @app.post("/games")
    def new_game(req: NewGameRequest):
        if req.k > MAX_RANK or req.k < 0:
            raise HTTPException(400, detail=f"k must be in 0..{MAX_RANK}")
        if not 1 <= req.multiplicity <= MAX_MULTIPLICITY:
            raise HTTPException(
                400, detail=f"multiplicity must be in 1..{MAX_MULTIPLICITY}")
        if len(req.sizes) < 2:
            raise HTTPException(400, detail="need at least two sizes")
        rounds = req.rounds if req.rounds is not None else req.k
        if not 0 <= rounds <= req.k:
            raise HTTPException(400, detail="rounds must be in 0..k")
        # re-verify the requested sizes are game-equivalent at rank k
        sizes = sorted(req.sizes)
        try:
            verified = _chains(req.k, max(sizes), attached=True)
        except SizeLimitExceeded as exc:
            raise HTTPException(400, detail=str(exc))
        if not set(sizes) <= set(verified):
            raise HTTPException(
                422, detail={"error": "sizes not game-equivalent at this rank",
                             "verified": verified})
        ef = gen_family(FamilyConfig("E", tuple(sizes), req.multiplicity))
        uf = gen_family(FamilyConfig("U", tuple(sizes), req.multiplicity))
        ctx = build_context(ef, uf, rank=req.k)
        sess = Session(
            id=secrets.token_hex(8), ctx=ctx,
            position=initial_game(ctx, rounds),
            pairing=empty_pairing(),
            config={"k": req.k, "sizes": sizes,
                    "multiplicity": req.multiplicity, "rounds": rounds})
        sessions[sess.id] = sess
        return _render_position(sess)

    @app.get("/games/{sid}")
    def get_game(sid: str):
        return _render_position(_get(sid))

    @app.delete("/games/{sid}")
    def delete_game(sid: str):
        _get(sid)
        del sessions[sid]
        return {"v": WIRE_VERSION, "deleted": sid}

    @app.post("/games/{sid}/moves")
    def play(sid: str, req: MoveRequest):
        sess = _get(sid)
        if not sess.lock.acquire(blocking=False):
            raise HTTPException(409, detail="a move on this session is "
                                            "already in flight")
        try:
            return _play_locked(sess, req)
        finally:
            sess.lock.release()

    def _play_locked(sess: Session, req: MoveRequest):
        p = sess.position
        if p.rounds_left == 0 and p.phase[0] == "spoiler":
            raise HTTPException(409, detail={"error": "game is over",
                                             "hints": _legal_hints(sess)})
        try:
            mv = _parse_move(sess, req)
        except IllegalMove as exc:
            raise HTTPException(409, detail={"error": str(exc),
                                             "hints": _legal_hints(sess)})
        reason = check_legal(p, mv)
        if reason is not None:
            raise HTTPException(409, detail={"error": reason,
                                             "hints": _legal_hints(sess)})
        after_spoiler = apply_move(p, mv)
        replies = []
        position = after_spoiler
        pairing = sess.pairing
        try:
            while position.actor == "duplicator":
                reply, pairing = duplicator_strategy(sess.ctx, position, pairing)
                position = apply_move(position, reply)
                replies.append(_describe_move(sess.ctx, reply, position))
        except InsufficientFreshComponents as exc:
            raise HTTPException(
                409, detail={"error": str(exc),
                             "minMultiplicity": exc.min_multiplicity})
        except NotLocallyWinning as exc:
            diags: list[str] = []
            locally_winning_check(sess.ctx, position, pairing,
                                  diagnostics=diags)
            raise HTTPException(
                500, detail={"error": "locally-winning invariant breached",
                             "exception": str(exc), "diagnostics": diags})
        round_complete = position.phase[0] == "spoiler"
        if round_complete:
            diags = []
            if not locally_winning_check(sess.ctx, position, pairing,
                                         diagnostics=diags):
                raise HTTPException(
                    500, detail={"error": "locally-winning invariant breached",
                                 "diagnostics": diags})
        sess.position = position
        sess.pairing = pairing
        entry = {"spoiler": req.model_dump(exclude_none=True),
                 "replies": replies}
        sess.history.append(entry)
        doc = _render_position(sess)
        doc["duplicatorReplies"] = replies
        return doc

    @app.get("/games/{sid}/history")
    def history(sid: str):
        sess = _get(sid)
        return {"v": WIRE_VERSION, "sessionId": sid, "history": sess.history}

    return app


def _describe_move(ctx: FamilyGameContext, mv: Move,
                   position: GamePosition) -> dict:
    """Wire rendering of a duplicator reply, read off the position it
    produced (the last appended pair carries both sides' labels)."""
    out: dict = {"kind": mv.kind}
    if mv.kind == "dup_element":
        le = position.left_elems[-1]
        ru = position.right_elems[-1]
        out["E"] = ctx.efam.structure.labels[le]
        out["U"] = ctx.ufam.structure.labels[ru]
    elif mv.kind in ("dup_set", "bounded_dup_set"):
        lm = position.left_sets[-1]
        rm = position.right_sets[-1]
        out["E"] = list(ctx.efam.structure.labels_of(lm))
        out["U"] = list(ctx.ufam.structure.labels_of(rm))
    elif mv.kind == "bound_reply":
        out["m"] = mv.bound
    return out
