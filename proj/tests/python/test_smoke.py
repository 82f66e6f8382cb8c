import math

import pytest

import motifclust

MA0011 = """>MA0011 Broad-complex_2
A  [  3  5  0  0 12  1  2  1 ]
C  [  1  2 10  1  0  1  0  2 ]
G  [  1  1  0  0  0  2  1  1 ]
T  [  7  4  2 11  0  8  9  8 ]
"""


def test_parse_and_consensus():
    records = motifclust.parse_motifs(MA0011)
    assert len(records) == 1
    assert records[0]["id"] == "MA0011"
    assert records[0]["counts"][0] == [3, 5, 0, 0, 12, 1, 2, 1]
    assert motifclust.consensus(records[0]["counts"]) == "taCTAttt"


def test_parse_error_is_a_value_error():
    with pytest.raises(ValueError):
        motifclust.parse_motifs(">X\nA [1 2]\nC [1]\nG [1]\nT [1]\n")


def test_kernel_and_prior():
    assert math.isclose(motifclust.log_dm_column([2, 0, 0, 0]), math.log(0.1), rel_tol=1e-12)
    assert math.isclose(motifclust.log_partition_prior([0, 0, 0]), math.log(1 / 3), rel_tol=1e-12)
    parts = motifclust.simulate_partitions(5, replicates=10, seed=3)
    assert len(parts) == 10
    assert parts == motifclust.simulate_partitions(5, replicates=10, seed=3)


def test_cluster_two_groups():
    a = [[12, 0, 0, 0, 0, 0, 12, 0], [0, 12, 0, 0, 12, 0, 0, 0], [0, 0, 12, 0, 0, 12, 0, 0], [0, 0, 0, 12, 0, 0, 0, 12]]
    b = [[0, 0, 0, 12, 12, 0, 0, 0], [12, 0, 0, 0, 0, 12, 0, 0], [0, 12, 0, 0, 0, 0, 12, 0], [0, 0, 12, 0, 0, 0, 0, 12]]
    result = motifclust.cluster([a, a, b, b], iterations=200, seed=2, lambda_=8.0)
    z = result["assignment"]
    assert z[0] == z[1] and z[2] == z[3] and z[0] != z[2]
    assert result["pairwise"][0][1] > 0.9
    assert math.isfinite(result["log_joint"])
