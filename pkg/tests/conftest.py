import pytest

from chanborrow import ChannelManager, ScenarioConfig, build_topology


@pytest.fixture(scope="session")
def defaults():
    return ScenarioConfig()


@pytest.fixture(scope="session")
def topo(defaults):
    return build_topology(defaults)


@pytest.fixture(scope="session")
def mini_config():
    return ScenarioConfig(channel_count_per_band=3, grid_rings=3)


@pytest.fixture(scope="session")
def mini_topo(mini_config):
    return build_topology(mini_config)


@pytest.fixture
def mini(mini_topo):
    return ChannelManager(mini_topo, inner_fraction=0.5)


def inner_pos(cell):
    return cell.center


def outer_pos(cell):
    return (cell.center[0] + 0.8 * cell.radius, cell.center[1])


def fill(mgr, cell_id, n=None, where=inner_pos):
    """Admit ``n`` calls (default: until blocked) at a cell; returns their channels."""
    cell = mgr.topology.cell(cell_id)
    got = []
    while n is None or len(got) < n:
        ch = mgr.admit_call(cell_id, where(cell))
        if ch is None:
            break
        got.append(ch)
    return got
