"""Architecture descriptions for convolutional generator stacks.

An :class:`ArchSpec` is an ordered list of convolution layers, each with a
kernel size, an integer spatial upsample factor, and channel widths.  It is
the input every other analysis in this package derives from: generative-field
sizes, influence footprints, and the style-space layout.

Architectures come from three places: JSON architecture files
(:func:`parse_arch` / :func:`load_arch`), the built-in StyleGAN2 presets
(:func:`stylegan2_preset`), or direct construction in code.  Specs are frozen
after validation and safe to share between concurrent analyses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

__all__ = [
    "ArchError",
    "ArchParseError",
    "ArchValidationError",
    "LayerSpec",
    "ArchSpec",
    "parse_arch",
    "serialize_arch",
    "load_arch",
    "stylegan2_preset",
    "input_resolution",
]

SUPPORTED_PRESET_RESOLUTIONS = (8, 16, 32, 64, 128, 256, 512, 1024)

# Feature-map width of a generator block, reverse-engineered from the
# published StyleGAN2 channel table.  Preset-only; the field arithmetic in
# fields.py never consumes it.
_CHANNEL_BUDGET = 16384
_CHANNEL_CAP = 512


class ArchError(ValueError):
    """Base class for architecture construction failures."""


class ArchParseError(ArchError):
    """Raised when an architecture file is syntactically or structurally malformed."""


class ArchValidationError(ArchError):
    """Raised when a structurally well-formed architecture violates an invariant."""


@dataclass(frozen=True)
class LayerSpec:
    """One convolution layer: kernel size, spatial upsample factor, channels.

    ``upsample`` is the integer factor by which the layer scales its input
    feature map (1 means an ordinary stride-1 convolution).  ``style_label``
    is an optional external name for the layer's per-channel modulation input
    (e.g. ``"s6"``).
    """

    id: str
    kernel: int
    upsample: int
    channels_in: int
    channels_out: int
    style_label: str | None = None


@dataclass(frozen=True)
class ArchSpec:
    """An ordered convolution stack with a base feature-map resolution."""

    name: str
    base_resolution: int
    layers: tuple[LayerSpec, ...]

    @property
    def depth(self) -> int:
        """Number of convolution layers."""
        return len(self.layers)

    @property
    def output_resolution(self) -> int:
        """Side length of the final feature map: base times all upsamples."""
        res = self.base_resolution
        for layer in self.layers:
            res *= layer.upsample
        return res

    def layer_index(self, layer_id: str) -> int:
        for i, layer in enumerate(self.layers):
            if layer.id == layer_id:
                return i
        raise ArchValidationError(f"unknown layer id {layer_id!r} in architecture {self.name!r}")


def _validate(arch: ArchSpec) -> ArchSpec:
    if not arch.layers:
        raise ArchValidationError(f"architecture {arch.name!r} has no layers")
    if arch.base_resolution < 1:
        raise ArchValidationError(
            f"architecture {arch.name!r}: base_resolution must be positive, got {arch.base_resolution}"
        )
    seen: set[str] = set()
    for i, layer in enumerate(arch.layers):
        if not layer.id:
            raise ArchValidationError(f"layer {i} has an empty id")
        if layer.id in seen:
            raise ArchValidationError(f"duplicate layer id {layer.id!r}")
        seen.add(layer.id)
        if layer.kernel < 1:
            raise ArchValidationError(f"{layer.id}: kernel must be >= 1, got {layer.kernel}")
        if layer.upsample < 1:
            raise ArchValidationError(f"{layer.id}: upsample must be >= 1, got {layer.upsample}")
        if layer.channels_in < 1 or layer.channels_out < 1:
            raise ArchValidationError(
                f"{layer.id}: channel counts must be positive, got "
                f"{layer.channels_in}->{layer.channels_out}"
            )
        if i > 0:
            prev = arch.layers[i - 1]
            if layer.channels_in != prev.channels_out:
                raise ArchValidationError(
                    f"{layer.id}: channels_in {layer.channels_in} does not match "
                    f"{prev.id} channels_out {prev.channels_out}"
                )
    return arch


_TOP_LEVEL_FIELDS = {"name", "base_resolution", "layers"}
_LAYER_FIELDS = {"id", "kernel", "upsample", "channels_in", "channels_out", "style_label"}
_LAYER_REQUIRED = {"kernel", "upsample", "channels_in", "channels_out"}


def _expect_int(value: object, where: str) -> int:
    # bool is an int subclass; reject it explicitly.
    if isinstance(value, bool) or not isinstance(value, int):
        raise ArchParseError(f"{where}: expected an integer, got {value!r}")
    return value


def parse_arch(text: str) -> ArchSpec:
    """Parse an architecture file (JSON document) into a validated ArchSpec.

    The document must contain exactly the top-level fields ``name`` (string),
    ``base_resolution`` (int) and ``layers`` (array of layer objects).  Layer
    objects carry ``kernel``, ``upsample``, ``channels_in``, ``channels_out``
    and optionally ``id`` and ``style_label``; unknown fields are rejected.
    Missing ids are canonicalized to ``conv0..convN-1``.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArchParseError(
            f"malformed architecture file at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc

    if not isinstance(doc, dict):
        raise ArchParseError("architecture file must be a JSON object at the top level")
    unknown = set(doc) - _TOP_LEVEL_FIELDS
    if unknown:
        raise ArchParseError(f"unknown top-level field(s): {', '.join(sorted(unknown))}")
    missing = _TOP_LEVEL_FIELDS - set(doc)
    if missing:
        raise ArchParseError(f"missing top-level field(s): {', '.join(sorted(missing))}")

    name = doc["name"]
    if not isinstance(name, str):
        raise ArchParseError(f"name: expected a string, got {name!r}")
    base_resolution = _expect_int(doc["base_resolution"], "base_resolution")
    raw_layers = doc["layers"]
    if not isinstance(raw_layers, list):
        raise ArchParseError("layers: expected an array of layer objects")

    layers: list[LayerSpec] = []
    for i, raw in enumerate(raw_layers):
        where = f"layers[{i}]"
        if not isinstance(raw, dict):
            raise ArchParseError(f"{where}: expected a layer object")
        unknown = set(raw) - _LAYER_FIELDS
        if unknown:
            raise ArchParseError(f"{where}: unknown field(s): {', '.join(sorted(unknown))}")
        missing = _LAYER_REQUIRED - set(raw)
        if missing:
            raise ArchParseError(f"{where}: missing field(s): {', '.join(sorted(missing))}")
        layer_id = raw.get("id", f"conv{i}")
        if not isinstance(layer_id, str):
            raise ArchParseError(f"{where}: id must be a string, got {layer_id!r}")
        style_label = raw.get("style_label")
        if style_label is not None and not isinstance(style_label, str):
            raise ArchParseError(f"{where}: style_label must be a string, got {style_label!r}")
        layers.append(
            LayerSpec(
                id=layer_id,
                kernel=_expect_int(raw["kernel"], f"{where}.kernel"),
                upsample=_expect_int(raw["upsample"], f"{where}.upsample"),
                channels_in=_expect_int(raw["channels_in"], f"{where}.channels_in"),
                channels_out=_expect_int(raw["channels_out"], f"{where}.channels_out"),
                style_label=style_label,
            )
        )

    return _validate(ArchSpec(name=name, base_resolution=base_resolution, layers=tuple(layers)))


def serialize_arch(arch: ArchSpec) -> str:
    """Render an ArchSpec back to its file form.  Round-trips through parse_arch."""
    layers = []
    for layer in arch.layers:
        obj: dict[str, object] = {
            "id": layer.id,
            "kernel": layer.kernel,
            "upsample": layer.upsample,
            "channels_in": layer.channels_in,
            "channels_out": layer.channels_out,
        }
        if layer.style_label is not None:
            obj["style_label"] = layer.style_label
        layers.append(obj)
    doc = {"name": arch.name, "base_resolution": arch.base_resolution, "layers": layers}
    return json.dumps(doc, indent=2) + "\n"


def load_arch(path: str) -> ArchSpec:
    """Read and parse an architecture file from disk."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ArchParseError(f"cannot read architecture file {path}: {exc}") from exc
    try:
        return parse_arch(text)
    except ArchError as exc:
        raise type(exc)(f"{path}: {exc}") from exc


def _block_width(block_resolution: int) -> int:
    return min(_CHANNEL_CAP, _CHANNEL_BUDGET // block_resolution)


def stylegan2_preset(resolution: int) -> ArchSpec:
    """Built-in StyleGAN2 generator stack for a given output resolution.

    The first generator block holds a single stride-1 3x3 convolution at the
    4x4 base; every further block contributes one upsampling (factor 2) 3x3
    convolution followed by one stride-1 3x3 convolution, doubling resolution
    per block.  Channel widths follow min(512, 16384 / block_resolution),
    which reproduces the published channel column for the 256x256 model.
    Style labels (s0, s2, s3, s5, s6, ...) skip the per-block RGB convolution
    indices, which are not represented here.
    """
    if resolution not in SUPPORTED_PRESET_RESOLUTIONS:
        raise ArchError(
            f"unsupported preset resolution {resolution}; expected one of "
            f"{', '.join(str(r) for r in SUPPORTED_PRESET_RESOLUTIONS)}"
        )
    base = 4
    layers: list[LayerSpec] = [
        LayerSpec(
            id="conv0",
            kernel=3,
            upsample=1,
            channels_in=_block_width(base),
            channels_out=_block_width(base),
            style_label="s0",
        )
    ]
    block = 1
    res = base * 2
    while res <= resolution:
        w_in = _block_width(res // 2)
        w_out = _block_width(res)
        idx = len(layers)
        layers.append(
            LayerSpec(
                id=f"conv{idx}",
                kernel=3,
                upsample=2,
                channels_in=w_in,
                channels_out=w_out,
                style_label=f"s{3 * block - 1}",
            )
        )
        layers.append(
            LayerSpec(
                id=f"conv{idx + 1}",
                kernel=3,
                upsample=1,
                channels_in=w_out,
                channels_out=w_out,
                style_label=f"s{3 * block}",
            )
        )
        block += 1
        res *= 2
    return _validate(
        ArchSpec(name=f"stylegan2-{resolution}", base_resolution=base, layers=tuple(layers))
    )


def input_resolution(arch: ArchSpec, layer: int) -> int:
    """Side length of the feature map entering layer ``layer`` (0-based).

    This is the true input resolution: an upsampling layer is reported at the
    resolution it consumes, not the one it produces.
    """
    if not 0 <= layer < arch.depth:
        raise ArchError(f"layer index {layer} out of range [0, {arch.depth})")
    res = arch.base_resolution
    for spec in arch.layers[:layer]:
        res *= spec.upsample
    return res


def validate_arch(arch: ArchSpec) -> ArchSpec:
    """Validate a directly-constructed ArchSpec (parse/preset paths validate already)."""
    return _validate(arch)
