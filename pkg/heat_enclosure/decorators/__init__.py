from .field_factory import FIELD_KINDS, add_field_kind
