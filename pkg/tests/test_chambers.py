import json
import random
from collections import Counter

import pytest

from conftest import diagonally_heavy, random_symmetric
from zchambers import count_posdef, count_zariski_chambers, enumerate_parallel, resume
from zchambers.chambers import kernels
from zchambers.chambers.checkpoint import Checkpoint, WorkItem
from zchambers.chambers.driver import (
    SearchInterrupted,
    checkpoint_at_start,
    make_runner,
    plan_work,
)
from zchambers.chambers.report import ChamberReport
from zchambers.chambers.search import enumerate_posdef, iter_posdef_subsets
from zchambers.errors import ArithmeticOverflow, CheckpointError, PreconditionError
from zchambers.exact_linalg import EliminationState, SymmetricIntMatrix
from zchambers.oracle import brute_force_posdef, oracle_enumerate
from zchambers.surfaces.del_pezzo import build_del_pezzo
from zchambers.surfaces.fermat import build_fermat_tridiagonal
from zchambers.surfaces.segre import build_segre_matrix


def _hist(subsets):
    return dict(Counter(len(s) for s in subsets))


def test_trivial_examples():
    assert list(iter_posdef_subsets(SymmetricIntMatrix([[2]]))) == [(1,)]
    A = SymmetricIntMatrix([[2, 1], [1, 2]])
    assert list(iter_posdef_subsets(A)) == [(1,), (1, 2), (2,)]
    assert count_zariski_chambers(SymmetricIntMatrix([[-2]])).total_chambers == 2


def test_del_pezzo_x3_subsets():
    seen = []
    report = enumerate_posdef(build_del_pezzo(3).negated(), seen.append)
    assert report.posdef_submatrix_count == 17 == len(seen)
    assert len(set(seen)) == 17


@pytest.mark.parametrize("seed", range(30))
def test_matches_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 9)
    A = random_symmetric(rng, n) if seed % 2 else diagonally_heavy(rng, n)
    found = list(iter_posdef_subsets(A))
    assert len(found) == len(set(found))
    assert set(found) == brute_force_posdef(A)


def test_dfs_order_is_lexicographic(rng):
    A = diagonally_heavy(rng, 10)
    found = list(iter_posdef_subsets(A))
    assert found == sorted(found)


def test_pruning_never_visits_supersets_of_rejected(rng):
    A = random_symmetric(rng, 10)
    rejected = []

    def hook(state, accepted):
        if not accepted:
            rejected.append(tuple(state.S))
        else:
            for r in rejected:
                # extensions of a rejected set by larger indices are never tried
                if r == tuple(state.S[: len(r)]):
                    raise AssertionError(f"{state.S} extends rejected {r}")

    list(iter_posdef_subsets(A, on_state=hook))


def test_histogram_report():
    r = count_posdef(build_del_pezzo(4).negated())
    assert r.total_chambers == 76
    assert r.posdef_submatrix_count == sum(r.histogram.values())
    assert r.max_support == max(r.histogram)
    assert r.histogram[1] == 10


def test_report_json_round_trip():
    r = count_posdef(build_del_pezzo(5).negated(), workers=2)
    data = json.loads(json.dumps(r.to_json_dict()))
    back = ChamberReport.from_json_dict(data)
    assert back.same_counts(r)
    assert data["total_chambers"] == "393"


# -- compiled kernels ----------------------------------------------------------------


@pytest.mark.parametrize("method", ["incremental", "literal", "from-scratch"])
@pytest.mark.parametrize("seed", range(12))
def test_kernels_match_python(method, seed):
    rng = random.Random(100 + seed)
    A = diagonally_heavy(rng, rng.randint(2, 12))
    expected = _hist(iter_posdef_subsets(A, width=None))
    delta, nxt = make_runner(A, "int64", method)(WorkItem((), 1, 0), 1 << 40)
    assert nxt is None
    assert delta == expected


def _kernel_state(A, subset):
    n = A.n
    S, _, B, T, lead = kernels.workspace(n)
    for t, v in enumerate(subset):
        S[t] = v - 1
    assert kernels._rebuild(A.to_numpy(), S, len(subset), B, T, lead) == kernels.STATUS_DONE
    return S, B, T, lead


@pytest.mark.parametrize("seed", range(8))
def test_fast_decision_reproduces_literal_grow(seed):
    # accepted candidates leave exactly the B and T of a full grow
    rng = random.Random(seed)
    A = diagonally_heavy(rng, 9)
    An = A.to_numpy()
    for subset in iter_posdef_subsets(A, width=None):
        s = len(subset)
        for k in range(subset[-1] + 1, A.n + 1):
            S, B, T, col = _kernel_state(A, subset)
            st, x, _ = kernels._decide(An, S, s, k - 1, B, T, col, False)
            assert st == kernels.STATUS_DONE
            ref = EliminationState.from_subset(A, subset, None).grow(k)
            assert x == ref.last_pivot()
            assert list(col[:s]) == [ref.B[i][s] for i in range(s)]
            st2, x2, _ = kernels._decide(An, S, s, k - 1, B, T, col, True)
            assert (x2 > 0) == (x > 0)


def test_kernel_overflow_is_reported():
    big = 2**40
    A = SymmetricIntMatrix([[big, 1, 0], [1, big, 1], [0, 1, big]])
    with pytest.raises(ArithmeticOverflow):
        count_posdef(A)
    assert count_posdef(A, backend="bigint").posdef_submatrix_count == 7
    with pytest.raises(ArithmeticOverflow):
        count_posdef(SymmetricIntMatrix([[2**62]]))


def test_bad_backend_or_method():
    A = SymmetricIntMatrix([[1]])
    with pytest.raises(PreconditionError):
        count_posdef(A, backend="float")
    with pytest.raises(PreconditionError):
        count_posdef(A, method="magic")


# -- work splitting and parallel runs ---------------------------------------------


def test_plan_work_covers_tree():
    A = build_del_pezzo(5).negated()
    shallow, items = plan_work(A, workers=4)
    assert len(items) >= 32
    total = Counter(shallow)
    runner = make_runner(A)
    for item in items:
        delta, nxt = runner(item, 1 << 40)
        assert nxt is None
        total.update(delta)
    assert sum(total.values()) + 1 == 393


@pytest.mark.parametrize("workers", [1, 2, 3, 4])
def test_parallel_counts_agree(workers):
    A = build_del_pezzo(6).negated()
    r = enumerate_parallel(A, workers)
    assert r.total_chambers == 2764
    assert r.workers == workers


def test_parallel_visitor_mode_is_deterministic(rng):
    A = diagonally_heavy(rng, 11)
    expected = list(iter_posdef_subsets(A))
    runs = []
    for workers in (1, 3, 3):
        seen = []
        r = enumerate_parallel(A, workers, seen.append)
        assert sorted(seen) == expected
        assert r.histogram == _hist(expected)
        runs.append(seen)
    assert runs[1] == runs[2]


def test_parallel_matches_oracle_random(rng):
    for _ in range(5):
        A = random_symmetric(rng, 12)
        expected = oracle_enumerate(A).histogram
        for workers in (1, 2, 4):
            assert count_posdef(A, workers=workers).histogram == expected


def test_small_budget_chunks():
    A = build_fermat_tridiagonal(12).negated()
    for backend in ("int64", "bigint"):
        r = count_posdef(A, budget=37, backend=backend)
        assert r.total_chambers == 2**12


# -- checkpoints ----------------------------------------------------------------------


class StopAfter:
    def __init__(self, calls):
        self.calls = calls

    def __call__(self):
        self.calls -= 1
        return self.calls <= 0


@pytest.mark.parametrize("workers", [1, 2])
def test_interrupt_and_resume(tmp_path, workers):
    A = build_del_pezzo(7).negated()
    path = tmp_path / "run.ckpt"
    with pytest.raises(SearchInterrupted) as info:
        count_posdef(A, workers=workers, budget=2000, checkpoint_path=path, should_stop=StopAfter(3))
    assert info.value.path == path
    cp = Checkpoint.load(path)
    assert cp.pending and sum(cp.histogram.values()) < 33644
    # interrupt the resumed run once more, then finish
    with pytest.raises(SearchInterrupted):
        resume(cp, A, budget=2000, checkpoint_path=path, should_stop=StopAfter(2))
    cp2 = Checkpoint.load(path)
    assert cp2.lineage[0] == cp.checkpoint_id
    r = resume(cp2, A, workers=workers, checkpoint_path=path)
    assert r.total_chambers == 33645
    assert len(r.lineage) == 2
    final = Checkpoint.load(path)
    assert final.pending == [] and sum(final.histogram.values()) == 33644


def test_checkpoint_at_start_equals_fresh_run():
    A = build_del_pezzo(6).negated()
    cp = Checkpoint.loads(checkpoint_at_start(A, workers=2).dumps())
    assert resume(cp, A).same_counts(count_posdef(A))


def test_checkpoint_rejects_other_matrix():
    A = build_del_pezzo(5).negated()
    cp = checkpoint_at_start(A)
    rows = A.to_lists()
    rows[0][0] += 1
    with pytest.raises(CheckpointError):
        resume(cp, SymmetricIntMatrix(rows))


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(version=99),
        lambda d: d.update(format="other"),
        lambda d: d.pop("pending"),
        lambda d: d["pending"].append({"subset": [3, 1], "next": 4, "floor": 0}),
        lambda d: d.update(histogram={"1": "x"}),
    ],
)
def test_corrupt_checkpoints(mutate):
    data = checkpoint_at_start(build_del_pezzo(4).negated(), workers=2).to_dict()
    mutate(data)
    with pytest.raises(CheckpointError):
        Checkpoint.loads(json.dumps(data))
    with pytest.raises(CheckpointError):
        Checkpoint.loads("{not json")


def test_missing_checkpoint_file(tmp_path):
    with pytest.raises(CheckpointError):
        Checkpoint.load(tmp_path / "none.ckpt")


def test_segre_first_block():
    r = count_zariski_chambers(build_segre_matrix().leading(16))
    assert r.total_chambers == 6521


def test_large_counts_survive_json():
    cp = Checkpoint("0" * 64, 64, {10: 1_900_843_848, 19: 1728}, [WorkItem((1, 2), 3, 2)])
    back = Checkpoint.loads(cp.dumps())
    assert back.histogram == cp.histogram and back.pending == cp.pending
