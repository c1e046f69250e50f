import numpy as np
import pytest

from genfields.archgraph import stylegan2_preset
from genfields.fields import fields_table, generative_field
from genfields.stylespace import (
    apply_control,
    face_scale,
    mask_rle,
    plan_by_gf,
    plan_by_layers,
    style_layout,
)

from helpers import make_arch, random_arch


@pytest.fixture(scope="module")
def preset256():
    arch = stylegan2_preset(256)
    return arch, fields_table(arch), style_layout(arch)


def test_layout_total_dims(preset256):
    _, _, layout = preset256
    assert layout.total_dims == 4928


def test_layout_ranges(preset256):
    _, _, layout = preset256
    assert layout.dims_of_layer("conv0") == range(0, 512)
    assert layout.dims_of_layer("conv12") == range(4864, 4928)


def test_layout_partition_and_round_trip(preset256):
    _, _, layout = preset256
    stops = [r.stop for r in layout.ranges]
    starts = [r.start for r in layout.ranges]
    assert starts[0] == 0
    assert stops[-1] == 4928
    assert starts[1:] == stops[:-1]  # contiguous, disjoint, ordered
    for d in range(4928):
        layer = layout.layer_of_dim(d)
        assert d in layout.dims_of_layer(layer)


def test_layer_of_dim_spot_values(preset256):
    _, _, layout = preset256
    assert layout.layer_of_dim(0) == "conv0"
    assert layout.layer_of_dim(4927) == "conv12"
    assert layout.layer_of_dim(4096) == "conv8"


def test_layer_of_dim_out_of_range(preset256):
    _, _, layout = preset256
    with pytest.raises(Exception, match="out of range"):
        layout.layer_of_dim(4928)
    with pytest.raises(Exception, match="out of range"):
        layout.layer_of_dim(-1)


def test_single_layer_layout():
    arch = make_arch("one", [3], [1], channels=8)
    layout = style_layout(arch)
    assert layout.total_dims == 8
    assert layout.dims_of_layer("conv0") == range(0, 8)


def test_apply_control_identity():
    s = np.array([0.5, -1.0, 2.0])
    out = apply_control(s, np.zeros(3))
    np.testing.assert_array_equal(out, s)


def test_apply_control_full_mask_is_addition():
    rng = np.random.default_rng(3)
    s = rng.normal(size=16)
    d = rng.normal(size=16)
    np.testing.assert_array_equal(apply_control(s, d), s + d)


def test_apply_control_empty_plan_bitwise_identity():
    arch = make_arch("two", [3, 3], [1, 1], channels=2)
    table, layout = fields_table(arch), style_layout(arch)
    plan = plan_by_layers(table, layout, "conv0", "conv0")
    empty = plan.__class__(
        enabled_layers=(), gf_range=plan.gf_range, mask=np.zeros_like(plan.mask)
    )
    s = np.array([-0.0, 1.25, 3.7, -2.5])
    out = apply_control(s, np.array([9.0, 9.0, 9.0, 9.0]), empty)
    assert out.tobytes() == s.tobytes()


def test_apply_control_masked_example():
    arch = make_arch("two", [3, 3], [1, 1], channels=1)
    table, layout = fields_table(arch), style_layout(arch)
    plan = plan_by_layers(table, layout, "conv0", "conv0")
    out = apply_control(np.array([1.0, 1.0]), np.array([0.5, -1.0]), plan)
    np.testing.assert_array_equal(out, [1.5, 1.0])


def test_apply_control_length_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        apply_control(np.zeros(3), np.zeros(4))


def test_mask_idempotent():
    arch = stylegan2_preset(8)
    table, layout = fields_table(arch), style_layout(arch)
    plan = plan_by_layers(table, layout, "conv1", "conv2")
    rng = np.random.default_rng(8)
    delta = rng.normal(size=layout.total_dims)
    once = apply_control(np.zeros(layout.total_dims), delta, plan)
    twice = apply_control(np.zeros(layout.total_dims), once, plan)
    np.testing.assert_array_equal(once, twice)


def test_plan_by_gf_published_configurations(preset256):
    _, table, layout = preset256
    plan = plan_by_gf(table, layout, 43, 506)
    assert plan.enabled_layers == tuple(f"conv{i}" for i in range(8))
    assert plan.gf_range == (43, 507)

    plan = plan_by_gf(table, layout, 7, 59)
    assert plan.enabled_layers == tuple(f"conv{i}" for i in range(6, 12))
    assert plan.gf_range == (7, 59)

    plan = plan_by_gf(table, layout, 59, 187)
    assert plan.enabled_layers == tuple(f"conv{i}" for i in range(3, 7))
    assert plan.gf_range == (59, 187)


def test_plan_by_gf_empty_selection(preset256):
    _, table, layout = preset256
    with pytest.raises(ValueError, match="no layer in GF range"):
        plan_by_gf(table, layout, 600, 700)


def test_plan_by_gf_bad_bounds(preset256):
    _, table, layout = preset256
    with pytest.raises(ValueError, match="exceeds"):
        plan_by_gf(table, layout, 100, 50)


def test_plan_by_gf_contiguous_on_random_archs():
    rng = np.random.default_rng(17)
    for _ in range(40):
        arch = random_arch(rng)
        table, layout = fields_table(arch), style_layout(arch)
        ids = [r.layer_id for r in table.records]
        lo = int(rng.integers(1, 40))
        hi = lo + int(rng.integers(0, 600))
        try:
            plan = plan_by_gf(table, layout, lo, hi)
        except ValueError:
            continue
        positions = [ids.index(l) for l in plan.enabled_layers]
        assert positions == list(range(positions[0], positions[-1] + 1))


def test_plan_by_layers_ranges(preset256):
    _, table, layout = preset256
    assert plan_by_layers(table, layout, "conv0", "conv2").gf_range == (251, 507)
    assert plan_by_layers(table, layout, "conv0", "conv4").gf_range == (123, 507)
    assert plan_by_layers(table, layout, "conv12", "conv12").gf_range == (3, 3)


def test_plan_by_layers_errors(preset256):
    _, table, layout = preset256
    with pytest.raises(Exception, match="conv99"):
        plan_by_layers(table, layout, "conv0", "conv99")
    with pytest.raises(ValueError, match="after"):
        plan_by_layers(table, layout, "conv5", "conv2")


def test_plan_mask_matches_enabled_ranges(preset256):
    arch, table, layout = preset256
    plan = plan_by_gf(table, layout, 7, 59)
    expected = np.zeros(4928, dtype=bool)
    for layer_id in plan.enabled_layers:
        dims = layout.dims_of_layer(layer_id)
        expected[dims.start : dims.stop] = True
    np.testing.assert_array_equal(plan.mask, expected)
    assert plan.enabled_dims == int(expected.sum())
    # gf_range is (field of last enabled, field of first enabled)
    first = arch.layer_index(plan.enabled_layers[0])
    last = arch.layer_index(plan.enabled_layers[-1])
    assert plan.gf_range == (generative_field(arch, last), generative_field(arch, first))


def test_face_scale_examples():
    one = np.zeros((17, 2))
    one[0] = (50, 100)
    one[16] = (150, 100)
    assert face_scale([one]) == 100.0

    two = np.zeros((17, 2))
    two[0] = (0, 0)
    two[16] = (120, 160)  # 3-4-5 scaled: distance 200
    assert face_scale([one, two]) == 150.0


def test_face_scale_ignores_z():
    lm = np.zeros((68, 3))
    lm[0] = (0, 0, 55.0)
    lm[16] = (30, 40, -99.0)
    assert face_scale([lm]) == 50.0


def test_face_scale_errors():
    with pytest.raises(ValueError, match="at least one"):
        face_scale([])
    with pytest.raises(ValueError, match="17"):
        face_scale([np.zeros((10, 2))])


def test_mask_rle_round_trip():
    rng = np.random.default_rng(12)
    for _ in range(20):
        mask = rng.random(size=int(rng.integers(1, 200))) < 0.3
        runs = mask_rle(mask)
        expanded = np.concatenate([np.full(run, bool(v)) for v, run in runs])
        np.testing.assert_array_equal(expanded, mask)
        # adjacent runs alternate
        values = [v for v, _ in runs]
        assert all(a != b for a, b in zip(values, values[1:]))
