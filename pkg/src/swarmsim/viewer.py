"""Live viewing bridge: streams frames over a websocket, accepts control.

One frame per tick is broadcast to every connected client as JSON:

    {"type": "frame", "t": <step>, "env": <viewed env index>,
     "entities": [{"name": ..., "shape": {"kind": ...},
                   "pos": [x, y], "rot": r, "color": [r, g, b]}, ...],
     "hud": {<scalar name>: <number or string>, ...}}

Clients send control messages ({"type": "control" | "select_env" |
"select_agent" | "reset" | "pause" | "resume", ...}) and get back an ack
or an error reply. Messages are queued and applied at the start of the
next tick, so a tick never sees a half-applied command. While paused the
loop re-broadcasts the same frozen frame.
"""
from __future__ import annotations

import asyncio
import json
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .env import Env
from .rollout import HeuristicPolicy


@dataclass
class FrameSnapshot:
    t: int
    env: int
    entities: list[dict]
    hud: dict = field(default_factory=dict)


def snapshot_from_env(env: Env, view_env: int, hud: dict | None = None) -> FrameSnapshot:
    entities = []
    for e in env.world.entities:
        entities.append(
            {
                "name": e.name,
                "shape": e.shape.descriptor(),
                "pos": [float(e.state.pos.x[view_env]), float(e.state.pos.y[view_env])],
                "rot": float(e.state.rot[view_env]),
                "color": [float(c) for c in e.color],
            }
        )
    return FrameSnapshot(
        t=int(env.step_count[view_env]), env=view_env, entities=entities, hud=hud or {}
    )


def encode_frame(snap: FrameSnapshot) -> str:
    return json.dumps(
        {
            "type": "frame",
            "t": snap.t,
            "env": snap.env,
            "entities": snap.entities,
            "hud": snap.hud,
        }
    )


def _ack(of: str) -> str:
    return json.dumps({"type": "ack", "of": of})


def _err(reason: str) -> str:
    return json.dumps({"type": "error", "reason": reason})


class ViewerSession:
    """Owns the env, the pending-command queue, and the tick loop's state."""

    def __init__(self, env: Env, policy=None):
        self.env = env
        self.policy = policy if policy is not None else HeuristicPolicy()
        self.view_env = 0
        self.selected_agent: str | None = None
        self.paused = False
        self.control_force = np.zeros(2)
        self.pending: deque[dict] = deque()
        self.last_rewards: list[np.ndarray] | None = None
        self.last_dones: np.ndarray | None = None
        self.frozen: FrameSnapshot | None = None
        self.obs = env.observations()

    # ---- network side -------------------------------------------------
    def handle_control(self, text: str) -> str:
        """Validate one client message; queue it for the next tick."""
        try:
            msg = json.loads(text)
        except (json.JSONDecodeError, UnicodeDecodeError):
            return _err("malformed JSON")
        if not isinstance(msg, dict) or "type" not in msg:
            return _err("message must be an object with a 'type'")
        kind = msg["type"]
        if kind == "control":
            force = msg.get("force")
            if (
                not isinstance(force, (list, tuple))
                or len(force) != 2
                or not all(isinstance(v, (int, float)) for v in force)
            ):
                return _err("control needs force: [fx, fy]")
            if any(np.isnan(v) or np.isinf(v) for v in force):
                return _err("control force must be finite")
        elif kind == "select_env":
            idx = msg.get("env")
            if not isinstance(idx, int) or not (0 <= idx < self.env.batch_size):
                return _err(f"env must be an int in [0, {self.env.batch_size})")
        elif kind == "select_agent":
            name = msg.get("agent")
            names = [a.name for a in self.env.agents]
            if name is not None and name not in names:
                return _err(f"unknown agent {name!r}")
        elif kind in ("reset", "pause", "resume"):
            pass
        else:
            return _err(f"unknown message type {kind!r}")
        self.pending.append(msg)
        return _ack(kind)

    # ---- sim side ------------------------------------------------------
    def _apply_pending(self) -> None:
        while self.pending:
            msg = self.pending.popleft()
            kind = msg["type"]
            if kind == "control":
                self.control_force = np.clip(np.asarray(msg["force"], dtype=float), -1.0, 1.0)
            elif kind == "select_env":
                self.view_env = msg["env"]
                self.frozen = None
            elif kind == "select_agent":
                self.selected_agent = msg["agent"]
                self.control_force = np.zeros(2)
            elif kind == "reset":
                self.obs = self.env.reset()
                self.last_rewards = None
                self.last_dones = None
                self.frozen = None
            elif kind == "pause":
                self.paused = True
            elif kind == "resume":
                self.paused = False
                self.frozen = None

    def _hud(self) -> dict:
        hud: dict = {"selected_agent": self.selected_agent or ""}
        if self.last_rewards is not None:
            for agent, r in zip(self.env.agents, self.last_rewards):
                hud[f"reward/{agent.name}"] = round(float(r[self.view_env]), 5)
        if self.last_dones is not None:
            hud["done"] = bool(self.last_dones[self.view_env])
        return hud

    def tick(self) -> FrameSnapshot:
        """Apply queued commands, advance once (unless paused), and frame."""
        self._apply_pending()
        if self.paused:
            if self.frozen is None:
                self.frozen = snapshot_from_env(self.env, self.view_env, self._hud())
            return self.frozen
        actions = self.policy(self.env, self.obs)
        if self.selected_agent is not None:
            for i, agent in enumerate(self.env.agents):
                if agent.name == self.selected_agent and agent.action_script is None:
                    raw = np.tile(
                        (self.control_force * agent.u_range).astype(float),
                        (self.env.batch_size, 1),
                    )
                    actions[i] = raw
        result = self.env.step(actions)
        self.obs = result.obs
        self.last_rewards = result.rewards
        self.last_dones = result.dones
        return snapshot_from_env(self.env, self.view_env, self._hud())


async def serve_viewer(
    env: Env,
    host: str = "127.0.0.1",
    port: int = 8765,
    tick_rate: float = 20.0,
    policy=None,
) -> None:
    """Run the tick/broadcast loop and a websocket endpoint until cancelled."""
    import websockets

    session = ViewerSession(env, policy)
    clients: set = set()

    async def handler(ws):
        clients.add(ws)
        try:
            async for message in ws:
                await ws.send(session.handle_control(message))
        except websockets.ConnectionClosed:
            pass
        finally:
            clients.discard(ws)

    interval = 1.0 / tick_rate
    async with websockets.serve(handler, host, port):
        while True:
            started = asyncio.get_event_loop().time()
            frame = session.tick()
            if clients:
                websockets.broadcast(clients, encode_frame(frame))
            elapsed = asyncio.get_event_loop().time() - started
            await asyncio.sleep(max(0.0, interval - elapsed))
