import io

import pytest

from slotcsp.domain import EMPTY, domain_of, interval
from slotcsp.errors import NotFoundError, PortKindError, ReentrancyError, ShareCardinalityError
from slotcsp.events import Bus, DomainMessage, TraceWriter
from slotcsp.variable import IntegralVariable


@pytest.fixture
def bus():
    return Bus()


def recorder(bus, owner, log, kind="int"):
    bus.register_owner(owner)
    return bus.input_port(owner, "in", kind, lambda p: log.append((owner, p)))


def test_emit_without_listeners_is_silent(bus):
    out = bus.output_port("a", "out", "int")
    bus.emit(out, 1)


def test_delivery_in_connection_order(bus):
    log = []
    out = bus.output_port("src", "out", "int")
    for owner in ("b", "c"):
        bus.connect(out, recorder(bus, owner, log))
    bus.emit(out, 7)
    assert log == [("b", 7), ("c", 7)]


def test_duplicate_connection_delivers_twice(bus):
    log = []
    out = bus.output_port("src", "out", "int")
    port = recorder(bus, "b", log)
    bus.connect(out, port)
    bus.connect(out, port)
    bus.emit(out, 1)
    assert len(log) == 2


def test_connect_checks_direction_and_kind(bus):
    out = bus.output_port("a", "out", "int")
    other = bus.output_port("b", "out", "int")
    with pytest.raises(PortKindError):
        bus.connect(out, other)
    text_in = bus.input_port("c", "in", "text", lambda p: None)
    with pytest.raises(PortKindError):
        bus.connect(out, text_in)
    with pytest.raises(TypeError):  # kind mismatch is a TypeError
        bus.connect(out, text_in)


def test_connect_unknown_port(bus):
    from slotcsp.events import Direction, Port
    out = bus.output_port("a", "out", "int")
    ghost = Port("ghost", "in", Direction.INPUT, "int")
    with pytest.raises(NotFoundError):
        bus.connect(out, ghost)
    with pytest.raises(NotFoundError):
        bus.connect(Port("ghost", "out", Direction.OUTPUT, "int"), recorder(bus, "b", []))


def test_disconnect(bus):
    log = []
    out = bus.output_port("a", "out", "int")
    conn = bus.connect(out, recorder(bus, "b", log))
    bus.disconnect(conn)
    bus.emit(out, 1)
    assert log == []
    with pytest.raises(NotFoundError):
        bus.disconnect(conn)


def test_disconnect_inside_handler_completes_current_dispatch(bus):
    log = []
    out = bus.output_port("a", "out", "int")
    conns = []

    def first(p):
        log.append(("first", p))
        if bus.is_live(conns[1]):
            bus.disconnect(conns[1])

    bus.register_owner("f")
    conns.append(bus.connect(out, bus.input_port("f", "in", "int", first)))
    conns.append(bus.connect(out, recorder(bus, "second", log)))
    bus.emit(out, 1)
    assert log == [("first", 1), ("second", 1)]
    bus.emit(out, 2)
    assert log[-1] == ("first", 2)
    assert len(log) == 3


def test_nested_dispatch_is_depth_first(bus):
    log = []
    a = bus.output_port("a", "out", "int")
    b = bus.output_port("b", "out", "int")

    def relay(p):
        log.append(("relay", p))
        bus.emit(b, p + 1)

    bus.connect(a, bus.input_port("r", "in", "int", relay))
    bus.connect(b, recorder(bus, "sink", log))
    bus.connect(a, recorder(bus, "late", log))
    bus.emit(a, 1)
    assert log == [("relay", 1), ("sink", 2), ("late", 1)]


def test_same_port_reentrancy_is_an_error(bus):
    a = bus.output_port("a", "out", "int")
    bus.connect(a, bus.input_port("r", "in", "int", lambda p: bus.emit(a, p)))
    with pytest.raises(ReentrancyError):
        bus.emit(a, 1)
    # the flag is cleared, so the port dispatches again
    for conn in bus.listeners(a):
        bus.disconnect(conn)
    bus.emit(a, 1)


def test_emit_on_input_port_rejected(bus):
    port = recorder(bus, "b", [])
    with pytest.raises(PortKindError):
        bus.emit(port, 1)


# -- marshalled dispatch -------------------------------------------------------

def _msg():
    return DomainMessage.of([("x", interval(1, 5)), ("y", interval(1, 5))])


def _cno(bus, owner, fn, calls):
    bus.register_owner(owner)

    def handler(msg):
        calls.append(owner)
        return fn(msg)
    return bus.input_port(owner, "receive", "domain_message", handler)


def test_marshalled_stops_at_failure(bus):
    calls = []
    ch = bus.output_port("c", "narrow", "domain_message")
    bus.connect(ch, _cno(bus, "n1", lambda m: m, calls))
    bus.connect(ch, _cno(bus, "n2", lambda m: m.fail(), calls))
    bus.connect(ch, _cno(bus, "n3", lambda m: m, calls))
    out = bus.emit_marshalled(ch, _msg())
    assert out.failure
    assert calls == ["n1", "n2"]


def test_marshalled_without_listeners_returns_input(bus):
    ch = bus.output_port("c", "narrow", "domain_message")
    msg = _msg()
    assert bus.emit_marshalled(ch, msg) is msg


def test_marshalled_pipeline_composes():
    def cut_x(m):
        return m.replace({"x": m["x"].remove(m["x"].max())})

    def cut_y(m):
        return m.replace({"y": m["y"] & interval(m["x"].min() + 1, 99)})

    bus = Bus()
    ch = bus.output_port("c", "narrow", "domain_message")
    calls = []
    bus.connect(ch, _cno(bus, "n1", cut_x, calls))
    bus.connect(ch, _cno(bus, "n2", cut_y, calls))
    piped = bus.emit_marshalled(ch, _msg())
    assert piped == cut_y(cut_x(_msg()))
    assert piped["x"] == interval(1, 4)
    assert piped["y"] == interval(2, 5)


def test_message_failure_follows_emptiness():
    m = _msg().replace({"x": EMPTY})
    assert m.failure
    assert not _msg().replace({"x": domain_of(2)}).failure


# -- share ---------------------------------------------------------------------

def test_share_returns_snapshot(bus):
    x = IntegralVariable(bus, "x", domain_of(2, 4))
    ask = bus.output_port("probe", "ask", "domain_request")
    bus.connect(ask, x.sharing_domain)
    snap = bus.share(ask)
    assert snap == domain_of(2, 4)
    x.receive_get_domain(domain_of(2))
    assert snap == domain_of(2, 4)
    assert bus.share(ask) == domain_of(2)


def test_share_cardinality(bus):
    ask = bus.output_port("probe", "ask", "domain_request")
    with pytest.raises(ShareCardinalityError):
        bus.share(ask)
    x = IntegralVariable(bus, "x", domain_of(1))
    y = IntegralVariable(bus, "y", domain_of(1))
    bus.connect(ask, x.sharing_domain)
    bus.connect(ask, y.sharing_domain)
    with pytest.raises(ShareCardinalityError):
        bus.share(ask)


def test_trace_lines(bus):
    stream = io.StringIO()
    bus.add_spy(TraceWriter(stream))
    x = IntegralVariable(bus, "x", interval(1, 5))
    sink = bus.input_port("obs", "in", "domain", lambda d: None)
    bus.connect(x.domain_changed, sink)
    x.receive_get_domain(domain_of(2, 4))
    assert stream.getvalue() == "EMIT x.domain_changed -> obs.in {2,4}\n"


def test_marshalled_reentrancy(bus):
    ch = bus.output_port("c", "narrow", "domain_message")
    bus.connect(ch, bus.input_port("n", "receive", "domain_message",
                                   lambda m: bus.emit_marshalled(ch, m)))
    with pytest.raises(ReentrancyError):
        bus.emit_marshalled(ch, _msg())
