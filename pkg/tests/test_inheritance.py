import pytest

from nmlab import catalog
from nmlab.errors import ContractError, InputError
from nmlab.inheritance import Path, holds, parse_net, path_valid, potential_paths, replay


def P(nodes, signs):
    return Path(tuple(nodes), tuple(signs))


def test_diamond_is_undecided():
    n = catalog.diamond()
    up = path_valid(n, P("abd", "++"))
    down = path_valid(n, P("acd", "+-"))
    assert not up.valid and not down.valid
    assert up.evidence[1] == "unanswered" and down.evidence[1] == "unanswered"
    assert not holds(n, "a", "d", "+") and not holds(n, "a", "d", "-")


def test_penguin():
    n = catalog.penguin()
    good = path_valid(n, P("acd", "+-"))
    assert good.valid
    # the competitor through b is answered by c, since c -> b
    (pre,) = good.evidence[1]
    assert pre.v == "b" and pre.z == "c"
    bad = path_valid(n, P("abd", "++"))
    assert not bad.valid and bad.evidence[1] == "precluded" and bad.evidence[2] == "c"
    long = path_valid(n, P("acbd", "+++"))
    assert not long.valid and long.evidence[0] == 2
    assert holds(n, "a", "d", "-") and not holds(n, "a", "d", "+")


def test_verdicts_replay():
    for n in (catalog.diamond(), catalog.penguin()):
        for x in n.points:
            for y in n.points:
                for p in potential_paths(n, x, y):
                    assert replay(n, path_valid(n, p))


def test_text_forms():
    assert parse_net(catalog.NIXON_TEXT).links == catalog.diamond().links
    assert parse_net(catalog.TWEETY_TEXT).links == catalog.penguin().links
    n = catalog.penguin()
    assert parse_net(n.to_text()).links == n.links


def test_bad_nets():
    with pytest.raises(InputError):
        parse_net("a -> b\nb -> a")
    with pytest.raises(InputError):
        parse_net("a -> b\na -/> b")
    with pytest.raises(InputError):
        parse_net("a => b")
    with pytest.raises(ContractError):
        path_valid(catalog.penguin(), P("ad", "+"))
