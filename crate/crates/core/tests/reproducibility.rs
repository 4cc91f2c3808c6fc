use irrbase::report::{f_series, render_figure1, FRow, OutputMeta, SeriesOptions};

fn meta() -> OutputMeta {
    OutputMeta { version: "t".into(), parse_id: "p".into(), config_hash: "h".into() }
}

#[test]
fn reruns_are_byte_identical() {
    let o = SeriesOptions::default();
    let a = f_series(1, 25, 8, None, &o).unwrap();
    let b = f_series(1, 25, 8, None, &o).unwrap();
    assert_eq!(FRow::table(&a).to_csv(&meta()), FRow::table(&b).to_csv(&meta()));
    assert_eq!(FRow::table(&a).to_json(&meta()), FRow::table(&b).to_json(&meta()));
    assert_eq!(render_figure1(&a).unwrap(), render_figure1(&b).unwrap());
}

#[test]
fn serial_and_batched_agree() {
    let one = SeriesOptions { batch: 1, ..Default::default() };
    let many = SeriesOptions { batch: 64, ..Default::default() };
    assert_eq!(f_series(3, 20, 6, None, &one).unwrap(), f_series(3, 20, 6, None, &many).unwrap());
}

#[test]
fn resume_after_interruption() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("run.ckpt");
    let o = SeriesOptions { batch: 4, ..Default::default() };
    let uninterrupted = f_series(1, 30, 6, None, &o).unwrap();

    // a run that stopped after n = 12, mid-way through writing n = 13
    f_series(1, 12, 6, Some(&ck), &o).unwrap();
    let mut text = std::fs::read_to_string(&ck).unwrap();
    text.push_str("13,ok,1");
    std::fs::write(&ck, &text).unwrap();

    let resumed = f_series(1, 30, 6, Some(&ck), &o).unwrap();
    assert_eq!(FRow::table(&resumed).to_csv(&meta()), FRow::table(&uninterrupted).to_csv(&meta()));

    // everything is stored now; a third run computes nothing new
    let stored = std::fs::read_to_string(&ck).unwrap();
    f_series(1, 30, 6, Some(&ck), &o).unwrap();
    assert_eq!(std::fs::read_to_string(&ck).unwrap(), stored);
}

#[test]
fn checkpoint_rejects_other_settings() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("run.ckpt");
    f_series(1, 3, 6, Some(&ck), &SeriesOptions::default()).unwrap();
    assert!(f_series(1, 3, 7, Some(&ck), &SeriesOptions::default()).is_err());
}
