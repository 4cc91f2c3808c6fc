use irrbase::exact::{sn_exact_small, SnParse};
use irrbase::precreal::{log_of_int_bits, DEFAULT_MAX_PRECISION_BITS};
use irrbase::sondow::{log_sn, log_sn_grouped, log_sn_naive, Options};

#[test]
fn grouped_and_naive_agree_up_to_30() {
    let o = Options::default();
    for n in 1..=30 {
        let p = log_sn(n, 128, &o).unwrap();
        let g = log_sn_grouped(n, 128, &o).unwrap();
        let v = log_sn_naive(n, 128, &o).unwrap();
        assert!(p.overlaps(&g) && p.overlaps(&v), "n={n}: {p:?} {g:?} {v:?}");
    }
}

#[test]
fn log_matches_exact_product() {
    for parse in SnParse::ALL {
        let o = Options { parse, ..Options::default() };
        for n in 1..=4 {
            let s = sn_exact_small(n, 100_000, parse).unwrap();
            let direct = log_of_int_bits(&s, 100, DEFAULT_MAX_PRECISION_BITS).unwrap();
            assert!(log_sn(n, 100, &o).unwrap().overlaps(&direct), "n={n} {}", parse.id());
        }
    }
}
