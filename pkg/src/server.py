#!/usr/bin/env python3
"""sftalgebra MCP server.

Exposes the same tools as the ``sftalgebra`` command line over the Model
Context Protocol. Every call goes through the compute guard: request size
limits, an execution timeout and response truncation.
"""

import argparse
import asyncio
import sys
import traceback
import uuid
from typing import Any

import mcp.server.stdio
import mcp.types as types
from mcp.server.lowlevel import NotificationOptions, Server
from mcp.server.models import InitializationOptions

from sft import __version__
from tools.registry import ToolRegistry
from utils.logging import configure_logging, get_logger
from utils.shared_config import SharedComputeConfig

SERVER_NAME = "sftalgebra"


async def run_stdio_server(server: Server) -> None:
    """Run server with STDIO transport."""
    logger = get_logger(__name__)
    logger.info("Ready to accept MCP connections via STDIO transport")

    try:
        async with mcp.server.stdio.stdio_server() as (read_stream, write_stream):
            logger.info("STDIO transport established, starting server run loop")
            await server.run(
                read_stream,
                write_stream,
                InitializationOptions(
                    server_name=SERVER_NAME,
                    server_version=__version__,
                    capabilities=server.get_capabilities(
                        notification_options=NotificationOptions(),
                        experimental_capabilities={},
                    ),
                ),
            )
    except KeyboardInterrupt:
        logger.info("Received keyboard interrupt, shutting down gracefully")
    except Exception as e:
        errors = e.exceptions if isinstance(e, BaseExceptionGroup) else [e]
        for exc in errors:
            logger.critical(
                f"Server run loop failed: {type(exc).__name__}: {exc}\n"
                + "".join(traceback.format_exception(type(exc), exc, exc.__traceback__))
            )
        logger.critical("Server terminating due to critical error")
        raise
    finally:
        logger.info("sftalgebra MCP server shutdown completed")


def create_server() -> Server:
    return Server(SERVER_NAME)


def register_handlers(server: Server, registry: ToolRegistry) -> None:
    """Wire tool listing and tool calls to the registry."""
    logger = get_logger(__name__)

    @server.list_tools()
    async def handle_list_tools() -> list[types.Tool]:
        correlation_id = f"list_{uuid.uuid4().hex[:8]}"
        logger.info("Tool list request received", extra={"correlation_id": correlation_id})
        tool_list = [
            types.Tool(
                name=tool.name,
                description=tool.description,
                inputSchema=tool.get_schema(),
            )
            for tool in registry.tools.values()
        ]
        logger.info(
            f"Tool list request completed: {len(tool_list)} tools available",
            extra={"correlation_id": correlation_id, "tools": registry.names},
        )
        return tool_list

    @server.call_tool()
    async def handle_call_tool(
        name: str, arguments: dict[str, Any] | None
    ) -> list[types.TextContent]:
        correlation_id = f"tool_{uuid.uuid4().hex[:8]}"
        try:
            result = await registry.call(name, arguments, correlation_id)
        except Exception as e:
            logger.error(
                f"Tool call failed: {name} - {e}",
                extra={
                    "correlation_id": correlation_id,
                    "tool_name": name,
                    "error_type": type(e).__name__,
                },
            )
            raise
        return [types.TextContent(type="text", text=result)]


async def main() -> None:
    configure_logging()
    logger = get_logger(__name__)

    parser = argparse.ArgumentParser(description="sftalgebra MCP server")
    parser.add_argument(
        "--transport",
        choices=["stdio"],
        default="stdio",
        help="Transport protocol (currently only stdio supported)",
    )
    args = parser.parse_args()

    logger.info(f"Starting sftalgebra MCP server {__version__}")
    logger.info(f"Transport selected: {args.transport}")

    shared = SharedComputeConfig()
    stats = shared.stats()
    logger.info(
        "Compute configuration loaded: "
        f"horizon={stats['horizon']}, default_timeout={stats['default_timeout']}s, "
        f"singleton_id: {stats['singleton_id']}"
    )

    server = create_server()
    registry = ToolRegistry.from_config(shared.get_config())
    register_handlers(server, registry)
    logger.info(f"Registered {len(registry.names)} tools: {registry.names}")

    await run_stdio_server(server)


def run() -> None:
    try:
        asyncio.run(main())
    except KeyboardInterrupt:
        print("\nServer interrupted by user", file=sys.stderr)
    except Exception as e:
        print(f"Server failed to start: {e}", file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    run()
