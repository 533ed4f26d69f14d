"""Sentinel: a distributed host/service monitoring and alarming engine.

Active plugin and network checks plus passively submitted results feed a
central soft/hard state machine which drives policy-filtered notifications.
Configuration and runtime status live in flat files; a small HTTP API serves
operator consoles, scripts and remote workers.
"""

ENGINE_NAME = "Sentinel"
__version__ = "0.1.0"
