"""Smoke test for the plgtsp extension module.

Build and install first:
    pip install -e crates/python --no-build-isolation
"""

import itertools
import math

import plgtsp


def brute_force(inst):
    n = inst.node_count
    best = None
    for rest in itertools.permutations(range(1, n)):
        order = [0, *rest]
        cost = sum(inst.dist(order[i], order[(i + 1) % n]) for i in range(n))
        best = cost if best is None else min(best, cost)
    return best


def main():
    assert abs(plgtsp.zeta(2.0) - math.pi**2 / 6) < 1e-12

    p = plgtsp.PowerLawParams(math.log(1e4), 2.0)
    assert p.max_degree == 100
    seq = dict(p.degree_sequence())
    assert seq[1] == 10000 and seq[100] == 1 and seq[3] == 1111

    g = plgtsp.sample_plg(plgtsp.PowerLawParams(3.0, 2.0), seed=11, giant=True)
    assert g.is_connected()
    again = plgtsp.Graph.from_json(g.to_json())
    assert again.edges == g.edges

    petersen = plgtsp.Graph(
        10,
        [(i, (i + 1) % 5) for i in range(5)]
        + [(i, i + 5) for i in range(5)]
        + [(5 + i, 5 + (i + 2) % 5) for i in range(5)],
    )
    for kind in ("graphic", "onetwo"):
        inst = plgtsp.MetricInstance(petersen, kind)
        exact = inst.solve("exact")
        assert exact.cost == 11 == brute_force(inst), kind
        assert inst.lower_bound() <= exact.cost
    graphic = plgtsp.MetricInstance(petersen, "graphic")
    chris = graphic.solve("christofides")
    graphic.validate(chris.order)
    assert chris.cost <= 1.5 * 11
    onetwo = plgtsp.MetricInstance(petersen, "onetwo")
    assert onetwo.solve("py12").cost * 3 <= 4 * 11
    assert plgtsp.ms_bound(petersen)["tour_bound"] <= 20 + 1e-9
    try:
        onetwo.solve("christofides")
    except ValueError:
        pass
    else:
        raise AssertionError("graphic algorithm accepted a (1,2) instance")

    assert abs(plgtsp.evaluate_bound("christofides_graphic", 1.5) - 1.339) < 1e-3
    assert abs(plgtsp.crossover("onetwo_det", "ref_8_7", 1.3, 2.2) - 1.666) < 0.01
    assert len(plgtsp.emit_curve("christofides_graphic", 1.25, 2.48, 0.01)) == 124
    assert plgtsp.figure_csv("lower").startswith("beta,value,bound_id\n")
    try:
        plgtsp.evaluate_bound("ms_graphic_stated", 1.5)
    except ValueError as e:
        assert "(2, 2.48]" in str(e)
    else:
        raise AssertionError("out-of-validity beta accepted")

    stats = plgtsp.run_stats(plgtsp.PowerLawParams(4.0, 3.0), trials=3, seed=1)
    assert set(stats) == {"m1", "a1", "a2", "n1_total", "n2_total"}

    cert = plgtsp.gadget_certificate(1)
    assert cert["nodes"] == 708 and cert["perfect_matching"]
    assert cert["histogram"] == {2: 156, 3: 516, 4: 36}
    assert cert["matching_profile"] == (156, 174, 12, 12)
    assert plgtsp.even_degree_packing(1, 2.5)["total_edges"] == 354
    gap = plgtsp.hardness_gap(1, 1.1, "packing")
    assert abs(gap["limit"] - 1.0012) < 2e-4
    print("smoke test passed")


if __name__ == "__main__":
    main()
