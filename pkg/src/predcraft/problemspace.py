"""Prediction-problem grammar: sentence templates with slotted options.

A template is a human-readable sentence with XX/YY/ZZ slots. Each slot
option carries a display text plus engine bindings; choosing one option per
slot yields a fully defined problem, and compiling it merges the template's
base bindings with the chosen options into labeling, cutoff, and
segmentation parameters. Bindings live in the template file, so new datasets
mean new templates, not code changes.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from .errors import CompileError
from .labeling import CutoffSpec, LabelingFunction
from .segmentation import SegmentSpec


@dataclass(frozen=True)
class SlotOption:
    display: str
    bind: dict


@dataclass(frozen=True)
class Slot:
    name: str
    options: tuple


@dataclass(frozen=True)
class ProblemTemplate:
    id: str
    entity: str
    sentence: str
    base: dict
    slots: tuple
    exclude: tuple = ()

    def slot(self, name: str) -> Slot:
        for slot in self.slots:
            if slot.name == name:
                return slot
        raise CompileError(f"template {self.id!r} has no slot {name!r}")


@dataclass(frozen=True)
class CompiledProblem:
    labeling_function: LabelingFunction
    cutoffs: CutoffSpec
    segments: SegmentSpec
    target: str
    instance_filter: Optional[tuple] = None


@dataclass(frozen=True)
class ProblemDefinition:
    template: ProblemTemplate
    choices: tuple  # one option index per slot, template order

    @property
    def problem_id(self) -> str:
        return f"{self.template.id}-" + "-".join(str(i) for i in self.choices)

    @property
    def entity(self) -> str:
        return self.template.entity

    def chosen(self) -> dict:
        return {
            slot.name: slot.options[index]
            for slot, index in zip(self.template.slots, self.choices)
        }


def load_templates(path=None) -> list[ProblemTemplate]:
    """Template list from a JSON file; the packaged default grammar when no
    path is given."""
    if path is None:
        raw = resources.files("predcraft").joinpath("data/problem_templates.json").read_text(
            encoding="utf-8"
        )
    else:
        raw = Path(path).read_text(encoding="utf-8")
    data = json.loads(raw)
    templates = []
    for spec in data["templates"]:
        slots = []
        for slot in spec["slots"]:
            options = []
            for option in slot["options"]:
                if "display" not in option:
                    raise CompileError(
                        f"slot {slot['name']!r} in template {spec['id']!r} has an "
                        "option without display text"
                    )
                options.append(
                    SlotOption(display=option["display"], bind=option.get("bind", {}))
                )
            if not options:
                raise CompileError(
                    f"slot {slot['name']!r} in template {spec['id']!r} has no options"
                )
            slots.append(Slot(name=slot["name"], options=tuple(options)))
        templates.append(
            ProblemTemplate(
                id=spec["id"],
                entity=spec["entity"],
                sentence=spec["sentence"],
                base=spec["base"],
                slots=tuple(slots),
                exclude=tuple(tuple(e) for e in spec.get("exclude", [])),
            )
        )
    return templates


def enumerate_problems(
    templates: Optional[Sequence[ProblemTemplate]] = None,
    exclude: Optional[set] = None,
) -> list[ProblemDefinition]:
    """Cartesian product over every template's slots, deterministic order.
    ``exclude`` drops problem ids; templates may also carry index triples to
    exclude."""
    if templates is None:
        templates = load_templates()
    exclude = exclude or set()
    out = []
    for template in templates:
        ranges = [range(len(slot.options)) for slot in template.slots]
        for combo in itertools.product(*ranges):
            if combo in template.exclude:
                continue
            definition = ProblemDefinition(template=template, choices=combo)
            if definition.problem_id in exclude:
                continue
            out.append(definition)
    return out


def render_sentence(definition: ProblemDefinition) -> str:
    """Substitute each slot's display text into the template sentence."""
    sentence = definition.template.sentence
    for name, option in definition.chosen().items():
        sentence = sentence.replace("{" + name + "}", option.display)
    return sentence


def _merge(base: dict, update: dict) -> dict:
    out = dict(base)
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def compile_problem(definition: ProblemDefinition) -> CompiledProblem:
    """Resolve a definition into engine parameters.

    Raises :class:`CompileError` naming the slot when a chosen option
    carries no bindings, or the template when merged bindings do not form
    valid parameters.
    """
    template = definition.template
    merged = {
        "label": dict(template.base.get("label", {})),
        "cutoff": dict(template.base.get("cutoff", {})),
        "segment": dict(template.base.get("segment", {})),
    }
    for slot, index in zip(template.slots, definition.choices):
        option = slot.options[index]
        if not option.bind:
            raise CompileError(
                f"slot {slot.name!r} option {option.display!r} in template "
                f"{template.id!r} is unmapped"
            )
        unknown = set(option.bind) - {"label", "cutoff", "segment"}
        if unknown:
            raise CompileError(
                f"slot {slot.name!r} in template {template.id!r} binds unknown "
                f"sections {sorted(unknown)}"
            )
        merged = _merge(merged, option.bind)

    try:
        function = LabelingFunction.from_json(merged["label"])
        cutoffs = CutoffSpec.from_json(merged["cutoff"])
        segments = SegmentSpec.from_json(merged["segment"])
    except Exception as exc:
        raise CompileError(
            f"template {template.id!r}, problem {definition.problem_id!r}: {exc}"
        ) from exc

    instance_filter = template.base.get("instance_filter")
    return CompiledProblem(
        labeling_function=function,
        cutoffs=cutoffs,
        segments=segments,
        target=template.base["target"],
        instance_filter=tuple(instance_filter) if instance_filter else None,
    )
