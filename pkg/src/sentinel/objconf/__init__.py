"""Flat-file object configuration: parsing, template resolution, validation
and asset-driven generation."""

from sentinel.objconf.model import (
    AssetRecord,
    CommandDef,
    ContactGroupDef,
    Diagnostic,
    HostDef,
    HostGroupDef,
    RawObjectBlock,
    ResolvedConfig,
    ServiceDef,
    TimePeriodDef,
    builtin_24x7,
)
from sentinel.objconf.parser import parse_objects, parse_files
from sentinel.objconf.resolve import resolve_templates
from sentinel.objconf.validate import validate
from sentinel.objconf.printer import print_config
from sentinel.objconf.assets import (
    DEFAULT_POLICY,
    GenerationError,
    generate_from_assets,
    parse_asset_csv,
    read_asset_csv,
)

__all__ = [
    "AssetRecord",
    "CommandDef",
    "ContactGroupDef",
    "DEFAULT_POLICY",
    "Diagnostic",
    "GenerationError",
    "HostDef",
    "HostGroupDef",
    "RawObjectBlock",
    "ResolvedConfig",
    "ServiceDef",
    "TimePeriodDef",
    "builtin_24x7",
    "generate_from_assets",
    "parse_asset_csv",
    "parse_files",
    "parse_objects",
    "print_config",
    "read_asset_csv",
    "validate",
]
