import numpy as np
import pytest

from risholo import (
    ScenarioGeometry,
    Surface,
    SurfaceSpec,
    direct_path_distance,
    element_positions,
    exact_distance,
    farfield_distances,
    focus_distances,
)
from risholo.geometry import grid_index, linear_index

from conftest import SPACING, make_geometry


class TestSurfaceSpec:
    def test_rejects_bad_counts(self):
        with pytest.raises(ValueError):
            SurfaceSpec(0, 4, SPACING)
        with pytest.raises(ValueError):
            SurfaceSpec(4, 4, -1.0)

    def test_element_area_is_spacing_squared(self):
        spec = SurfaceSpec(4, 4, SPACING)
        assert spec.element_area == pytest.approx(SPACING**2)


class TestScenarioGeometry:
    def test_offset_must_lie_inside_walls(self):
        for bad in (0.0, 15.0, 16.0, -1.0):
            with pytest.raises(ValueError):
                make_geometry(ris_offset=bad)

    def test_wavenumber(self):
        geom = make_geometry()
        assert geom.wavenumber == pytest.approx(2 * np.pi / geom.wavelength)


class TestElementPositions:
    def test_first_tx_element_by_hand(self):
        # 8x8 array, first element sits at (-d_ris, -3.5 d, l_t - 3.5 d)
        geom = make_geometry(tx_side=8, tx_height=2.0, ris_offset=7.5)
        d = geom.tx.spacing
        pos = element_positions(geom, Surface.TX)
        np.testing.assert_allclose(pos[0], [-7.5, -3.5 * d, 2.0 - 3.5 * d], rtol=1e-14)

    def test_tx_y_coordinates_are_centered(self):
        geom = make_geometry(tx_side=8)
        pos = element_positions(geom, Surface.TX)
        assert abs(pos[:, 1].mean()) < 1e-12

    def test_first_ris_cell_by_hand(self):
        geom = make_geometry(ris_side=50)
        d = geom.ris.spacing
        pos = element_positions(geom, Surface.RIS)
        np.testing.assert_allclose(pos[0], [-24.5 * d, -24.5 * d, 0.0], rtol=1e-14)

    def test_plane_constraints(self):
        geom = make_geometry()
        tx = element_positions(geom, Surface.TX)
        rx = element_positions(geom, Surface.RX)
        ris = element_positions(geom, Surface.RIS)
        assert np.all(tx[:, 0] == -geom.ris_offset)
        assert np.all(rx[:, 0] == geom.wall_distance - geom.ris_offset)
        assert np.all(ris[:, 2] == 0.0)

    def test_counts_match_surface_sizes(self):
        geom = make_geometry(tx_side=8, rx_side=8, ris_side=10)
        assert element_positions(geom, Surface.TX).shape == (64, 3)
        assert element_positions(geom, Surface.RIS).shape == (100, 3)

    def test_positions_are_distinct_for_rectangular_surfaces(self):
        # non-square surface: the linearized order must visit each cell once
        d = SPACING
        geom = ScenarioGeometry(
            tx=SurfaceSpec(3, 5, d),
            rx=SurfaceSpec(5, 3, d),
            ris=SurfaceSpec(4, 7, d),
            wall_distance=10.0,
            ris_offset=4.0,
            tx_height=2.0,
            rx_height=2.0,
            wavelength=2 * d,
        )
        for surface, count in ((Surface.TX, 15), (Surface.RX, 15), (Surface.RIS, 28)):
            pos = element_positions(geom, surface)
            assert pos.shape == (count, 3)
            assert len({tuple(np.round(p, 12)) for p in pos}) == count

    def test_ris_ordering_is_y_fast_x_slow(self):
        geom = make_geometry(ris_side=4)
        pos = element_positions(geom, Surface.RIS)
        # first count_b entries share the lowest x and walk y upward
        assert np.all(pos[:4, 0] == pos[0, 0])
        assert np.all(np.diff(pos[:4, 1]) > 0)
        assert pos[4, 0] > pos[0, 0]

    def test_index_round_trip(self):
        for fast_count in (1, 3, 8):
            for linear in range(1, 3 * fast_count + 1):
                slow, fast = grid_index(linear, fast_count)
                assert 1 <= fast <= fast_count
                assert linear_index(slow, fast, fast_count) == linear


class TestExactDistance:
    def test_pythagorean_triple(self):
        assert exact_distance(np.zeros(3), np.array([3.0, 4.0, 0.0])) == pytest.approx(5.0)

    def test_identical_points(self):
        p = np.array([1.0, -2.0, 0.5])
        assert exact_distance(p, p) == 0.0

    def test_symmetry(self):
        rng = np.random.default_rng(3)
        p, q = rng.standard_normal(3), rng.standard_normal(3)
        assert exact_distance(p, q) == pytest.approx(exact_distance(q, p))

    def test_center_to_center_equals_wall_distance_at_equal_heights(self):
        geom = make_geometry(tx_height=2.0, rx_height=2.0, wall_distance=15.0)
        assert exact_distance(geom.tx_center, geom.rx_center) == pytest.approx(15.0)
        assert direct_path_distance(geom) == pytest.approx(15.0)

    def test_triangle_inequality_on_sampled_triples(self):
        geom = make_geometry()
        pts = np.vstack(
            [
                element_positions(geom, Surface.TX),
                element_positions(geom, Surface.RX),
                element_positions(geom, Surface.RIS),
            ]
        )
        rng = np.random.default_rng(11)
        for _ in range(200):
            a, b, c = pts[rng.integers(0, len(pts), 3)]
            assert exact_distance(a, c) <= exact_distance(a, b) + exact_distance(b, c) + 1e-12


class TestFocusDistances:
    def test_center_cell_values(self):
        # odd side count puts one cell exactly at the surface center
        geom = make_geometry(ris_side=5, wall_distance=15.0, ris_offset=7.5, tx_height=2.0)
        center = 12  # (x, y) = (0, 0) for a 5x5 grid
        d1, d2 = focus_distances(geom, center)
        assert d1 == pytest.approx(np.sqrt(7.5**2 + 4.0))
        assert d2 == pytest.approx(np.sqrt(7.5**2 + 4.0))

    def test_matches_exact_distance_to_surface_centers(self):
        geom = make_geometry(ris_side=6, wall_distance=12.0, ris_offset=5.0)
        d1, d2 = focus_distances(geom)
        cells = element_positions(geom, Surface.RIS)
        for n in range(geom.num_ris):
            assert d1[n] == pytest.approx(exact_distance(geom.tx_center, cells[n]))
            assert d2[n] == pytest.approx(exact_distance(cells[n], geom.rx_center))

    def test_index_out_of_range(self):
        geom = make_geometry(ris_side=4)
        with pytest.raises(IndexError):
            focus_distances(geom, 16)
        with pytest.raises(IndexError):
            farfield_distances(geom, -1)


class TestFarfieldDistances:
    def test_zero_offset_cell_is_exact(self):
        geom = make_geometry(ris_side=5)
        center = 12
        far = farfield_distances(geom, center)
        d1 = np.hypot(geom.ris_offset, geom.tx_height)
        d2 = np.hypot(geom.wall_distance - geom.ris_offset, geom.rx_height)
        assert far[0] == pytest.approx(d1)
        assert far[1] == pytest.approx(d2)

    def test_hand_value_at_known_cell_offset(self):
        # 3x1 cell row spaced 0.1 m: cell offsets are exactly -0.1, 0, +0.1
        geom = ScenarioGeometry(
            tx=SurfaceSpec(1, 1, 0.1),
            rx=SurfaceSpec(1, 1, 0.1),
            ris=SurfaceSpec(3, 1, 0.1),
            wall_distance=10.0,
            ris_offset=5.0,
            tx_height=2.0,
            rx_height=2.0,
            wavelength=0.2,
        )
        d1_far, _ = farfield_distances(geom, 2)  # cell at x = +0.1
        assert d1_far == pytest.approx(np.sqrt(29.0) + 0.5 / np.sqrt(29.0))

    def test_relative_error_small_at_kilometer_range(self):
        geom = make_geometry(ris_side=50, wall_distance=1000.0, ris_offset=500.0)
        focus = focus_distances(geom)
        far = farfield_distances(geom)
        for f, a in zip(far, focus):
            assert np.max(np.abs(f - a) / a) < 1e-4

    def test_error_shrinks_as_link_distance_grows(self):
        errors = []
        for offset in (5.0, 10.0, 20.0, 40.0, 80.0):
            geom = make_geometry(ris_side=16, wall_distance=2 * offset, ris_offset=offset)
            f1, _ = focus_distances(geom)
            a1, _ = farfield_distances(geom)
            errors.append(np.max(np.abs(a1 - f1)))
        assert all(e2 < e1 for e1, e2 in zip(errors, errors[1:]))
