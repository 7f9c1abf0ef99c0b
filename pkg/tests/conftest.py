import socket
import threading
import time
from pathlib import Path

import httpx
import pytest
import uvicorn

from foodcal.catalog import load_catalog
from foodcal.requirements import load_requirement_table
from foodcal.service import ServiceConfig, create_app

FIXTURES = Path(__file__).parent / "fixtures"
FLAT_CATALOG = FIXTURES / "catalog_flat.json"
FLAT_REQUIREMENTS = FIXTURES / "requirements_flat.json"


@pytest.fixture(scope="session")
def default_catalog():
    return load_catalog()


@pytest.fixture(scope="session")
def default_table():
    return load_requirement_table()


@pytest.fixture(scope="session")
def flat_catalog():
    return load_catalog(FLAT_CATALOG)


@pytest.fixture(scope="session")
def flat_table():
    return load_requirement_table(FLAT_REQUIREMENTS)


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


class LiveServer:
    """Real uvicorn server in a daemon thread; tests talk to it over HTTP."""

    def __init__(self, config: ServiceConfig):
        config.port = free_port()
        self.config = config
        self.base_url = f"http://127.0.0.1:{config.port}"
        app = create_app(config)
        self._server = uvicorn.Server(
            uvicorn.Config(app, host="127.0.0.1", port=config.port, log_level="error")
        )
        self._thread = threading.Thread(target=self._server.run, daemon=True)

    def start(self) -> "LiveServer":
        self._thread.start()
        deadline = time.time() + 15
        while time.time() < deadline:
            try:
                httpx.get(f"{self.base_url}/v1/meta", timeout=1.0)
                return self
            except httpx.TransportError:
                time.sleep(0.05)
        raise RuntimeError("server did not come up")

    def stop(self) -> None:
        self._server.should_exit = True
        self._thread.join(timeout=10)

    def client(self, token: str | None = None) -> httpx.Client:
        headers = {"Authorization": f"Bearer {token}"} if token else {}
        return httpx.Client(base_url=self.base_url, headers=headers, timeout=10.0)


@pytest.fixture(scope="session")
def flat_server():
    """Live server over the flat fixtures: every target is exactly reachable."""
    server = LiveServer(
        ServiceConfig(
            catalog_path=FLAT_CATALOG,
            requirements_path=FLAT_REQUIREMENTS,
            master_seed=99,
        )
    ).start()
    yield server
    server.stop()
