"""treeforms: exact computations with oriented labeled unitrivalent trees,
quadratic refinements of bilinear forms, and unimodular form invariants."""

from .abelian import (
    FPAbelianGroup,
    GroupHom,
    cokernel,
    fp_group,
    hom,
    hom_is_isomorphism,
    image,
    is_exact,
    kernel,
    smith_normal_form,
    tensor_Z2,
)
from .errors import ResourceLimitError, TreeformsError, TreeSyntaxError
from .lattice import (
    SymIntForm,
    Z2QuadraticSpace,
    Z4Refinement,
    arf_z2,
    brown_z8,
    diagonal_form,
    e8_form,
    find_characteristic,
    is_characteristic,
    ks,
    signature,
    tau,
    torsor_check,
)
from .quadratic import (
    BilinearForm,
    GroupWithInvolution,
    PairQuadraticGroup,
    QuadraticFormData,
    QuadraticGroup,
    cocycle_word,
    exact_sequence_symmetric,
    from_involution,
    induced_morphism,
    universal_commutative,
    universal_nc,
    universal_symmetric,
    validate_quadratic_group,
)
from .treegroups import (
    LieElement,
    TreeElement,
    TreeGroup,
    TwistedElement,
    bracket,
    build_L,
    build_T,
    build_Tinf,
    build_Tinf_universal,
    leaf_element,
    lie_element,
    map_bound,
    map_h,
    map_p,
    map_q,
    pairing,
    psi,
    tree_pairing_form,
    verify_exact,
)
from .trees import (
    InfTree,
    Leaf,
    Node,
    RootedTree,
    TreeVector,
    UnrootedTree,
    as_variant,
    canonical_unrooted,
    enumerate_trees,
    ihx_triple,
    inner_product,
    order,
    parse_tree,
    print_tree,
    rooted_product,
    splits,
)

__version__ = "0.1.0"
