"""Field specifications, the potential catalog and equivalence transformations."""

from .catalog import (CatalogError, CatalogKey, CatalogRow, catalog_instance, catalog_row,
                      catalog_rows, catalogInstance)
from .spec import DomainHint, FieldSpec, field_from_strings, monopole, stormer, uniform_b, zero_field

__all__ = [
    "CatalogError", "CatalogKey", "CatalogRow", "DomainHint", "FieldSpec",
    "catalog_instance", "catalogInstance", "catalog_row", "catalog_rows",
    "field_from_strings", "monopole", "stormer", "uniform_b", "zero_field",
]
