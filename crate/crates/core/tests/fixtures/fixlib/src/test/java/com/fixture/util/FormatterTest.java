package com.fixture.util;

import org.junit.Test;
import static org.junit.Assert.*;

public class FormatterTest {
    @Test
    public void testPad() {
        Formatter formatter = new Formatter();
        assertNotNull(formatter.pad(subject()));
    }

    private String subject() {
        return "x";
    }
}
