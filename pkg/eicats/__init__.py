from .eicat import FiniteEICategory, validate_category
from .instances import InstanceSpec, cyclic_group, fi_spec, generate, vi_spec
from .repmod import CatModule, Side, dualize, free_module, hom_space
from .nakayama import adjunction_check, inverse_nakayama, nakayama
from .resolve import injective_resolution, resolution_step, verify_resolution
