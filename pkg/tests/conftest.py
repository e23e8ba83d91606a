import sys

import pytest

from fin4 import Engine, EngineConfig, TokenDesign, derive_account
from fin4.ledger import LedgerOps
from fin4.reputation import RepConfig
from fin4.tcr import TcrParams


def acct(label: str) -> str:
    return derive_account(f"test:{label}")


A, B, C, D = (acct(x) for x in "ABCD")


@pytest.fixture
def engine():
    return Engine()


def plain_design(symbol="PAT", **kw) -> TokenDesign:
    return TokenDesign(name=f"{symbol} token", symbol=symbol, **kw)


def funded_engine(tcr=None, rep=None, accounts=(A, B, C, D), gov_each=10):
    """Engine whose accounts each hold ``gov_each`` claimed GOV.

    REP is earned the normal way (one approved zero-verifier claim per
    10 REP), with rep_per_claim set so a single claim reaches a GOV level.
    """
    rep = rep or RepConfig(rep_per_creation=1, rep_per_claim=100, gov_threshold=100,
                           gov_per_level=gov_each)
    e = Engine(EngineConfig(rep=rep, tcr=tcr or TcrParams()))
    tid = e.create_token(acct("setup"), plain_design("SETUP"))
    for a in accounts:
        e.submit_claim(a, tid)
        e.claim_gov(a)
    return e


@pytest.fixture(autouse=True)
def check_rollbacks(request, monkeypatch):
    """Verify every rollback against a full snapshot, except in timed tests."""
    if request.node.get_closest_marker("timed") is None:
        monkeypatch.setattr(LedgerOps, "_check_rollback", True)


def pytest_configure(config):
    config.addinivalue_line("markers", "timed: runs at production speed (no rollback cross-check)")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
