from src.routers import bfs, clip, evaluate, frame, synth

SUBCOMMANDS = [frame, clip, bfs, synth, evaluate]

__all__ = ["SUBCOMMANDS", "bfs", "clip", "evaluate", "frame", "synth"]
