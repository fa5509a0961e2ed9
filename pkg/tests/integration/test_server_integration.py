"""Integration tests for the sftalgebra MCP server."""

import json

import mcp.types as types
import pytest

from server import create_server, register_handlers
from tools.registry import ToolRegistry
from conftest import summary_text, validate_json_response


@pytest.fixture
def wired_server(compute_config):
    server = create_server()
    register_handlers(server, ToolRegistry.from_config(compute_config))
    return server


async def _call(server, name, arguments):
    handler = server.request_handlers[types.CallToolRequest]
    request = types.CallToolRequest(
        method="tools/call",
        params=types.CallToolRequestParams(name=name, arguments=arguments),
    )
    result = await handler(request)
    return result.root.content[0].text


class TestServerIntegration:
    """Requests through the registered MCP handlers."""

    @pytest.mark.asyncio
    async def test_list_tools(self, wired_server):
        handler = wired_server.request_handlers[types.ListToolsRequest]
        result = await handler(types.ListToolsRequest(method="tools/list"))
        names = {tool.name for tool in result.root.tools}
        assert {"invariants_report", "equiv", "poly", "niep", "sgc2"} <= names
        for tool in result.root.tools:
            assert tool.inputSchema["type"] == "object"

    @pytest.mark.asyncio
    async def test_invariant_report(self, wired_server, ashley):
        text = await _call(wired_server, "invariants_report", {"matrix": ashley.to_rows()})
        doc = validate_json_response(text)
        assert doc["verdict"] == "info"
        assert "primitive: yes" in summary_text(doc)

    @pytest.mark.asyncio
    async def test_chain_then_compress(self, wired_server):
        chain = [
            {"R": [[1], [1]], "S": [[1, 1]], "s": 1},
            {"R": [[1], [1]], "S": [[1, 1]], "s": -1},
        ]
        checked = validate_json_response(
            await _call(wired_server, "equiv", {"action": "verify-chain", "chain": chain})
        )
        assert checked["verdict"] == "pass"
        compressed = validate_json_response(
            await _call(wired_server, "equiv", {"action": "compress", "chain": chain})
        )
        witness = {k: compressed["data"][k] for k in ("R", "S", "lag")}
        verified = validate_json_response(
            await _call(
                wired_server,
                "equiv",
                {
                    "action": "verify-se",
                    "a": [[1, 1], [1, 1]],
                    "b": [[1, 1], [1, 1]],
                    "witness": witness,
                },
            )
        )
        assert verified["verdict"] == "pass"

    @pytest.mark.asyncio
    async def test_psse_log_replays(self, wired_server):
        built = validate_json_response(
            await _call(wired_server, "poly", {"action": "psse", "r": [[1], [1]], "s": [[1, 1]]})
        )
        replayed = validate_json_response(
            await _call(wired_server, "poly", {"action": "move", "log": built["data"]["log"]})
        )
        assert replayed["verdict"] == "pass"

    @pytest.mark.asyncio
    async def test_failing_verdict(self, wired_server):
        text = await _call(
            wired_server, "structure", {"action": "period", "matrix": [[1, 1, 1], [1, 1, 1], [0, 0, 0]]}
        )
        doc = json.loads(text)
        assert doc["verdict"] == "fail"
        assert doc["summary"] == ["reducible"]
