"""Checks on the reference oracles themselves, before anything relies on them."""

import math

from oracles import circle_cover_radius, grid_covered, three_disk_centers


def test_three_disks_of_radius_sqrt3_over_2_cover_the_disk():
    step = 0.002
    assert grid_covered(three_disk_centers(), math.sqrt(3) / 2, step)


def test_three_disks_slightly_smaller_miss_points():
    assert not grid_covered(three_disk_centers(), math.sqrt(3) / 2 - 0.005, 0.005)


def test_arc_length_bounds():
    assert circle_cover_radius(2) == 1.0
    assert math.isclose(circle_cover_radius(3), math.sqrt(3) / 2)
    assert math.isclose(circle_cover_radius(4), math.sqrt(2) / 2)
