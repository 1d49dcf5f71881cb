"""The parser state machine: a fixed-depth graph of length, token, similarity
and output nodes, mutated one message at a time.

Traversal per message: length node (token count) -> token node (split key) ->
similarity node (candidate group list) -> output node (final template). Each
length node also caches the last matched group as a fast path.

Single-writer contract: one ParseDag is driven by one logical stream at a
time; snapshots may be read when no writer is active.
"""

import json
from dataclasses import dataclass, field

from .preprocess import SplitKey, select_split_token, DEFAULT_SPECIAL_CHARS
from .similarity import (
    Token,
    WILDCARD,
    current_st,
    lcs,
    new_threshold_state,
    sim_seq,
    tem_sim,
    ThresholdState,
)

SNAPSHOT_SCHEMA = "logsieve-state-v1"


def render_template(event: list[Token]) -> str:
    """Space-joined template text with wildcards shown as ``*``."""
    return " ".join("*" if t is None else t for t in event)


@dataclass
class LogGroup:
    group_id: int
    event: list[Token]
    member_ids: list[int]
    threshold: ThresholdState | None  # None only for the empty-message group
    output_id: int


@dataclass
class OutputNode:
    output_id: int
    group_ids: list[int]
    # Set at merge time; single-group nodes render their group's live event.
    merged_template: list[Token] | None = None


@dataclass
class LengthNode:
    # split key -> ordered group-id list (the similarity node)
    split_nodes: dict[SplitKey, list[int]] = field(default_factory=dict)
    cache: int | None = None


@dataclass
class StructuredRecord:
    line_id: int
    group_id: int
    output_id: int
    template_text: str


class ParseDag:
    """Online template miner over a stream of tokenized log messages."""

    def __init__(
        self,
        merge_enabled: bool = False,
        merge_threshold: float | None = None,
        special_chars: frozenset[str] = DEFAULT_SPECIAL_CHARS,
        cache_enabled: bool = True,
    ):
        if merge_enabled and merge_threshold is None:
            raise ValueError("merge_threshold required when merging is enabled")
        self.merge_enabled = merge_enabled
        self.merge_threshold = merge_threshold
        self.special_chars = special_chars
        self.cache_enabled = cache_enabled
        self.length_nodes: dict[int, LengthNode] = {}
        self.groups: dict[int, LogGroup] = {}
        self.outputs: dict[int, OutputNode] = {}
        self._next_group_id = 1
        self._next_output_id = 1
        self.cache_hits = 0

    # -- rendering -------------------------------------------------------

    def output_template(self, output_id: int) -> list[Token]:
        node = self.outputs[output_id]
        if node.merged_template is not None:
            return node.merged_template
        return self.groups[node.group_ids[0]].event

    # -- search ----------------------------------------------------------

    def search(self, tokens: list[str]) -> int | None:
        """Find the group accepting this message, or None.

        The cached group of the message's length node is tried first with the
        same acceptance test the full search applies; on a miss the full
        length -> split key -> similarity traversal runs.
        """
        length_node = self.length_nodes.get(len(tokens))
        if length_node is None:
            return None
        if self.cache_enabled and length_node.cache is not None:
            cached = self.groups[length_node.cache]
            if cached.threshold is not None and sim_seq(tokens, cached.event) >= current_st(
                cached.threshold
            ):
                self.cache_hits += 1
                return cached.group_id
        if not tokens:
            ids = length_node.split_nodes.get(None)
            return ids[0] if ids else None
        key = select_split_token(tokens, self.special_chars)
        group_ids = length_node.split_nodes.get(key)
        if group_ids is None:
            return None
        return self._match_group(group_ids, tokens)

    def _match_group(self, group_ids: list[int], tokens: list[str]) -> int | None:
        """Best candidate by similarity; ties go to the template with the
        fewest wildcards, then earliest creation. Accepted only if the score
        reaches the candidate's own threshold."""
        best = None
        best_score = -1.0
        best_wildcards = -1
        for gid in group_ids:
            group = self.groups[gid]
            score = sim_seq(tokens, group.event)
            wildcards = len(group.event) - sum(1 for t in group.event if t is not None)
            if score > best_score or (score == best_score and wildcards < best_wildcards):
                best = group
                best_score = score
                best_wildcards = wildcards
        if best is None:
            return None
        if best_score >= current_st(best.threshold):
            return best.group_id
        return None

    # -- update ----------------------------------------------------------

    def create_group(self, tokens: list[str]) -> int:
        """Materialize the path for an unmatched message and start a new group
        whose template is the message itself."""
        length_node = self.length_nodes.setdefault(len(tokens), LengthNode())
        key = select_split_token(tokens, self.special_chars) if tokens else None
        group_ids = length_node.split_nodes.setdefault(key, [])

        group_id = self._next_group_id
        self._next_group_id += 1
        output_id = self._next_output_id
        self._next_output_id += 1

        threshold = new_threshold_state(tokens) if tokens else None
        group = LogGroup(
            group_id=group_id,
            event=list(tokens),
            member_ids=[],
            threshold=threshold,
            output_id=output_id,
        )
        group_ids.append(group_id)
        self.groups[group_id] = group
        self.outputs[output_id] = OutputNode(output_id=output_id, group_ids=[group_id])

        if self.merge_enabled and tokens:
            self._try_merge(group)
        return group_id

    def _try_merge(self, new_group: LogGroup) -> int | None:
        """Fuse the fresh group into the most similar existing output node if
        template similarity strictly exceeds the merge threshold. The merged
        node's template becomes the LCS of the two templates."""
        best_id = None
        best_score = -1.0
        for output_id in sorted(self.outputs):
            if output_id == new_group.output_id:
                continue
            template = self.output_template(output_id)
            if not template:
                continue
            score = tem_sim(new_group.event, template)
            if score > best_score:
                best_score = score
                best_id = output_id
        if best_id is None or best_score <= self.merge_threshold:
            return None
        target = self.outputs[best_id]
        target.merged_template = lcs(self.output_template(best_id), new_group.event)
        target.group_ids.append(new_group.group_id)
        del self.outputs[new_group.output_id]
        new_group.output_id = best_id
        return best_id

    def update_group(self, group: LogGroup, line_id: int, tokens: list[str]) -> int:
        """Absorb a matched message: record membership, wildcard every literal
        position that disagrees, and advance the threshold counter."""
        group.member_ids.append(line_id)
        replaced = 0
        event = group.event
        for i, token in enumerate(tokens):
            if event[i] is not None and event[i] != token:
                event[i] = WILDCARD
                replaced += 1
        if replaced and group.threshold is not None:
            group.threshold.eta += replaced
        return replaced

    def parse_line(self, line_id: int, tokens: list[str]) -> StructuredRecord:
        """Match or create a group for one preprocessed, tokenized message."""
        group_id = self.search(tokens)
        if group_id is None:
            group_id = self.create_group(tokens)
            group = self.groups[group_id]
            group.member_ids.append(line_id)
        else:
            group = self.groups[group_id]
            self.update_group(group, line_id, tokens)
        self.length_nodes[len(tokens)].cache = group_id
        return StructuredRecord(
            line_id=line_id,
            group_id=group_id,
            output_id=group.output_id,
            template_text=render_template(self.output_template(group.output_id)),
        )

    # -- reporting -------------------------------------------------------

    def snapshot_groups(self) -> list[tuple[int, str, list[int]]]:
        """Creation-ordered dump of output nodes with merged member-ID lists."""
        out = []
        for output_id in sorted(self.outputs):
            node = self.outputs[output_id]
            members: list[int] = []
            for gid in node.group_ids:
                members.extend(self.groups[gid].member_ids)
            members.sort()
            out.append((output_id, render_template(self.output_template(output_id)), members))
        return out

    # -- persistence -----------------------------------------------------

    def to_json(self) -> str:
        """Serialize parser state for resumable streaming."""

        def enc(event):
            return [{"w": True} if t is None else t for t in event]

        state = {
            "schema": SNAPSHOT_SCHEMA,
            "merge_enabled": self.merge_enabled,
            "merge_threshold": self.merge_threshold,
            "special_chars": "".join(sorted(self.special_chars)),
            "next_group_id": self._next_group_id,
            "next_output_id": self._next_output_id,
            "length_nodes": [
                {
                    "length": length,
                    "cache": node.cache,
                    "split_nodes": [
                        {
                            "key": list(key) if key is not None else None,
                            "group_ids": ids,
                        }
                        for key, ids in node.split_nodes.items()
                    ],
                }
                for length, node in sorted(self.length_nodes.items())
            ],
            "groups": [
                {
                    "group_id": g.group_id,
                    "event": enc(g.event),
                    "member_ids": g.member_ids,
                    "output_id": g.output_id,
                    "threshold": None
                    if g.threshold is None
                    else {
                        "st_init": g.threshold.st_init,
                        "base": g.threshold.base,
                        "eta": g.threshold.eta,
                        "dig_len": g.threshold.dig_len,
                        "seq_len": g.threshold.seq_len,
                    },
                }
                for _, g in sorted(self.groups.items())
            ],
            "outputs": [
                {
                    "output_id": o.output_id,
                    "group_ids": o.group_ids,
                    "merged_template": None
                    if o.merged_template is None
                    else enc(o.merged_template),
                }
                for _, o in sorted(self.outputs.items())
            ],
        }
        return json.dumps(state, indent=2)

    @classmethod
    def from_json(cls, text: str, cache_enabled: bool = True) -> "ParseDag":
        state = json.loads(text)
        if state.get("schema") != SNAPSHOT_SCHEMA:
            raise ValueError(f"unsupported state schema: {state.get('schema')!r}")

        def dec(event):
            return [None if isinstance(t, dict) else t for t in event]

        dag = cls(
            merge_enabled=state["merge_enabled"],
            merge_threshold=state["merge_threshold"],
            special_chars=frozenset(state["special_chars"]),
            cache_enabled=cache_enabled,
        )
        dag._next_group_id = state["next_group_id"]
        dag._next_output_id = state["next_output_id"]
        for entry in state["length_nodes"]:
            node = LengthNode(cache=entry["cache"])
            for sn in entry["split_nodes"]:
                key = tuple(sn["key"]) if sn["key"] is not None else None
                node.split_nodes[key] = list(sn["group_ids"])
            dag.length_nodes[entry["length"]] = node
        for entry in state["groups"]:
            thr = entry["threshold"]
            dag.groups[entry["group_id"]] = LogGroup(
                group_id=entry["group_id"],
                event=dec(entry["event"]),
                member_ids=list(entry["member_ids"]),
                threshold=None if thr is None else ThresholdState(**thr),
                output_id=entry["output_id"],
            )
        for entry in state["outputs"]:
            dag.outputs[entry["output_id"]] = OutputNode(
                output_id=entry["output_id"],
                group_ids=list(entry["group_ids"]),
                merged_template=None
                if entry["merged_template"] is None
                else dec(entry["merged_template"]),
            )
        return dag
