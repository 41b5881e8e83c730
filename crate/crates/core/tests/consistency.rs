use revealing::families::FamilyKind;
use revealing::studies::consistency_report;

#[test]
fn every_route_agrees_on_each_limit() {
    for kind in FamilyKind::ALL {
        let r = consistency_report(kind, 256, 50_000, 3).unwrap();
        assert!(r.agree, "{kind:?}: {r:?}");
        assert!((r.solver_value - r.limit).abs() <= 2.0 / 256.0);
        match kind {
            FamilyKind::Balance | FamilyKind::Ranking => assert!(r.ode_terminal.is_some()),
            _ => assert!(r.ode_terminal.is_none()),
        }
        assert_eq!(r.simulation.is_some(), kind == FamilyKind::Secretary);
    }
}
